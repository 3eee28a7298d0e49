"""Pure-Python participation scan (fallback kernel).

Same contract as the compiled kernel: given, per atom position, the
pre-filtered candidate rows (integer-encoded constants; per-atom constant
and repeated-variable checks already applied) and the pairwise positional
equality constraints induced by shared variables, compute for every row
whether it can be extended to a full satisfying combination with one row
per remaining atom position.  The scan tries companion combinations
depth-first with early exit, so each candidate costs at most the product
of the other atoms' extension sizes.
"""

from __future__ import annotations

__all__ = ["participation_masks"]

Row = tuple[int, ...]


def _complete(rows, pair_eqs, order, depth, bound):
    if depth == len(order):
        return True
    j = order[depth]
    eqs_j = pair_eqs[j]
    for row in rows[j]:
        ok = True
        for b, row_b in bound.items():
            for pj, pb in eqs_j[b]:
                if row[pj] != row_b[pb]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            bound[j] = row
            if _complete(rows, pair_eqs, order, depth + 1, bound):
                del bound[j]
                return True
            del bound[j]
    return False


def participation_masks(rows: list[list[Row]],
                        pair_eqs: list[list[tuple[tuple[int, int], ...]]]) -> list[list[bool]]:
    k = len(rows)
    out: list[list[bool]] = []
    for i in range(k):
        order = [j for j in range(k) if j != i]
        mask = []
        for row in rows[i]:
            mask.append(_complete(rows, pair_eqs, order, 0, {i: row}))
        out.append(mask)
    return out
