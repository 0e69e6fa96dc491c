"""Shared hypothesis strategies: small presentations from the families."""

from hypothesis import strategies as st

from pnilpotent.catalog import build_E, build_family_A, build_family_B
from pnilpotent.rank2 import enumerate_rank2, build_group

PRIMES = st.sampled_from([2, 3, 5])


def _rank2_small():
    out = []
    for x in range(4, 7):
        en = enumerate_rank2(x)
        out += en.type1 + en.type2
    return out


RANK2_SMALL = _rank2_small()


@st.composite
def small_presentations(draw):
    """Presentations of order at most 5^5 / 3^6 / 2^6."""
    p = draw(PRIMES)
    kind = draw(st.sampled_from(["rank2", "A", "B", "E"]))
    if kind == "rank2":
        q = draw(st.sampled_from(RANK2_SMALL))
        if p == 5 and q.order_exp > 5:
            q = RANK2_SMALL[0]
        return build_group(q, p)
    if kind == "A":
        return build_family_A(2, 2, 1, p).presentation
    if kind == "B":
        return build_family_B(3, 2, 0, p).presentation
    idx = draw(st.sampled_from([1, 3, 4, 5]))
    return build_E(idx, 3 if p == 5 else p).presentation
