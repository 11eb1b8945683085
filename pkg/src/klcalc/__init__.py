"""klcalc: exact Kazhdan-Lusztig combinatorics for finite Coxeter groups.

The package builds symmetric groups (and small general Coxeter groups from
their matrices), computes the Kazhdan-Lusztig basis of the Hecke algebra
with build-time self-verification, classifies cells three independent ways,
runs the decategorified functor calculus on graded characters, and verifies
the classification of surviving functors on parabolic blocks, including the
Cartan-determinant non-degeneracy argument.  See the README for the CLI.
"""

from .b2 import IdentityFailed, b2_counterexample_check
from .cells import (
    CellDecomposition,
    MultipleInvolutions,
    NoInvolution,
    a_value,
    cells_via_mu,
    cells_via_rs,
    duflo_involution,
)
from .coxeter import (
    CoxeterGroup,
    CoxeterMatrix,
    GroupElement,
    GroupMismatch,
    InfiniteGroup,
    InvalidMatrix,
    NotTypeA,
    TypeA,
    bruhat_leq,
    build_group,
    descents,
    inverse,
    length,
    longest_element,
    min_coset_reps,
    multiply,
)
from .grothendieck import (
    GradedClass,
    NegativeCoefficient,
    NotStrictlyBelow,
    apply_functor,
    degree_bounds_check,
    parabolic_verma_euler,
    projective_class,
    simple_class,
    theta_on_simple,
    verma_class,
)
from .hecke import (
    HeckeElement,
    KLTable,
    NormalizationViolation,
    bar_hecke,
    build_kl_table,
    mult_std,
)
from .laurent import LaurentPoly, ZeroPolynomial, parse_poly
from .parablock import (
    EmptyIntersection,
    ParabolicBlock,
    SupportLeak,
    SupportMismatch,
    build_block,
    cartan_det,
    cartan_matrix,
    cell_matrices,
    functor_matrix,
    specht_crosscheck,
    survives,
)
from .tableaux import (
    Partition,
    SizeMismatch,
    StandardTableau,
    dominance_leq,
    kostka,
    partitions_of,
    rs_correspondence,
    shape,
    syt_count,
)

__version__ = "0.1.0"
