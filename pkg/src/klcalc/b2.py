"""A character identity in the dihedral group of order 8 with no type-A analogue.

Write s, t for the two generators of the Coxeter group with m(s,t) = 4.
At the level of graded characters the functor image theta_{st} L(ts)
decomposes,

    [theta_{st} L(ts)] = [theta_t L(t)] + [theta_t L(tst)],

with all three classes nonzero.  In symmetric groups no such two-term
identity exists for the corresponding classes; this module checks both
facts exactly (the dihedral identity coefficientwise, and the absence of
any two-summand identity for the analogous S_3 class over all pairs of
nonzero functor-on-simple classes).

Only characters are compared here: these are the strongest consequences
of the underlying module isomorphisms that a Grothendieck-group engine
can decide.
"""

from __future__ import annotations

from .coxeter import CoxeterMatrix, TypeA, build_group
from .grothendieck import engine
from .hecke import build_kl_table


class IdentityFailed(RuntimeError):
    """The dihedral character identity did not hold coefficientwise."""


def b2_counterexample_check() -> dict:
    """Verify the dihedral identity and the absence of an S_3 analogue.

    Returns a report dict; raises :class:`IdentityFailed` if the dihedral
    identity itself fails.
    """
    group = build_group(CoxeterMatrix(((1, 4), (4, 1))))
    table = build_kl_table(group)
    eng = engine(table)

    st = group.element_from_word((1, 2)).index
    ts = group.element_from_word((2, 1)).index
    t = group.element_from_word((2,)).index
    tst = group.element_from_word((2, 1, 2)).index

    target = eng.theta_on_simple(st, ts)
    part_a = eng.theta_on_simple(t, t)
    part_b = eng.theta_on_simple(t, tst)

    nonzero = not (target.is_zero() or part_a.is_zero() or part_b.is_zero())
    identity = target == part_a + part_b
    if not identity:
        raise IdentityFailed(
            f"[theta_st L(ts)] = {target!r} but the candidate sum is {(part_a + part_b)!r}"
        )

    return {
        "identity_holds": identity,
        "classes_nonzero": nonzero,
        "target": target.to_json(),
        "summands": [part_a.to_json(), part_b.to_json()],
        "s3_analogue_exists": _s3_two_term_identity_exists(),
        "pass": identity and nonzero and not _s3_two_term_identity_exists(),
    }


def _s3_two_term_identity_exists() -> bool:
    """Is the S_3 class [theta_{s1 s2} L(s2 s1)] a sum of two nonzero
    functor-on-simple classes?  Exhaustive over all pairs."""
    group = build_group(TypeA(3))
    table = build_kl_table(group)
    eng = engine(table)
    target = eng.theta_on_simple(
        group.element_from_word((1, 2)).index,
        group.element_from_word((2, 1)).index,
    )
    classes = []
    for x in range(group.size):
        for y in range(group.size):
            cls = eng.theta_on_simple(x, y)
            if not cls.is_zero():
                classes.append(cls)
    for i, c1 in enumerate(classes):
        for c2 in classes[i:]:
            if c1 + c2 == target:
                return True
    return False
