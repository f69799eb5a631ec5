"""Dense linear algebra over an implemented field, on raw reps."""


def det(F, rows):
    m = [list(r) for r in rows]
    n = len(m)
    result = F.one_rep()
    for col in range(n):
        pivot = next((r for r in range(col, n) if not F.is_zero(m[r][col])), None)
        if pivot is None:
            return F.zero_rep()
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = F.neg(result)
        p = m[col][col]
        result = F.mul(result, p)
        inv = F.inv(p)
        for r in range(col + 1, n):
            if F.is_zero(m[r][col]):
                continue
            f = F.mul(m[r][col], inv)
            m[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(m[r], m[col])]
    return result


def solve(F, columns, target):
    """Find x with sum_i x_i * columns[i] == target, or None.

    ``columns`` is a list of equal-length vectors (lists of reps).
    """
    n = len(columns)
    if n == 0:
        return [] if all(F.is_zero(t) for t in target) else None
    dim = len(target)
    aug = [[columns[j][i] for j in range(n)] + [target[i]] for i in range(dim)]
    pivots = []
    row = 0
    for col in range(n):
        pivot = next((r for r in range(row, dim) if not F.is_zero(aug[r][col])), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = F.inv(aug[row][col])
        aug[row] = [F.mul(inv, a) for a in aug[row]]
        for r in range(dim):
            if r != row and not F.is_zero(aug[r][col]):
                f = aug[r][col]
                aug[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == dim:
            break
    for r in range(row, dim):
        if not F.is_zero(aug[r][n]):
            return None
    x = [F.zero_rep()] * n
    for r, col in enumerate(pivots):
        x[col] = aug[r][n]
    return x


def rank(F, vectors):
    rows = [list(v) for v in vectors]
    if not rows:
        return 0
    r = 0
    ncols = len(rows[0])
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if not F.is_zero(rows[i][col])), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = F.inv(rows[r][col])
        for i in range(r + 1, len(rows)):
            if not F.is_zero(rows[i][col]):
                f = F.mul(rows[i][col], inv)
                rows[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(rows[i], rows[r])]
        r += 1
    return r
