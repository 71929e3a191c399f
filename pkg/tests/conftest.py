import random

from ihskit import exactmat


def random_unimodular(rng: random.Random, n: int, steps: int = 12):
    """Random element of GL_n(Z) with determinant +-1, built from shears
    and swaps so the inverse stays integral."""
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        if rng.random() < 0.5:
            c = rng.randint(-2, 2)
            for k in range(n):
                m[i][k] += c * m[j][k]
        else:
            m[i], m[j] = m[j], m[i]
    assert abs(exactmat.det_int(m)) == 1
    return tuple(tuple(row) for row in m)
