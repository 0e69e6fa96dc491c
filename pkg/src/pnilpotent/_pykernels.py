"""Pure-Python collector, the reference implementation of the kernels."""


class CollectionError(RuntimeError):
    """Collection did not finish within its step budget."""


def collect(data, exps, word, budget):
    """Collection from the left: return ``exps * word`` as a normal exponent list.

    ``data`` carries ``rel`` (relative orders), ``powers`` and ``conj`` as
    described in :mod:`pnilpotent.presentation`.  ``word`` exponents must be
    non-negative.
    """
    rel = data.rel
    powers = data.powers
    conj = data.conj
    k = len(rel)
    z = list(exps)
    stack = [(g, e) for g, e in reversed(word) if e]
    steps = 0
    while stack:
        steps += 1
        if steps > budget:
            raise CollectionError(f"collection exceeded {budget} steps")
        g, e = stack.pop()
        tail = [j for j in range(g + 1, k) if z[j]]
        if not tail:
            q, z[g] = divmod(z[g] + e, rel[g])
            for _ in range(q):
                stack.extend(reversed(powers[g]))
            continue
        # move one g past the tail: tail * g = g * tail^g
        if e > 1:
            stack.append((g, e - 1))
        for j in reversed(tail):
            w = conj[g][j]
            for _ in range(z[j]):
                stack.extend(reversed(w))
            z[j] = 0
        z[g] += 1
        if z[g] == rel[g]:
            z[g] = 0
            stack.extend(reversed(powers[g]))
    return z
