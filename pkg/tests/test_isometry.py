import random
from fractions import Fraction

import pytest

from ihskit.errors import IsometryError
from ihskit.lattice import (
    Lattice,
    Sublattice,
    build_standard,
    direct_sum,
    is_hyperbolic,
)
from ihskit.isometry import (
    Isometry,
    cartan_dieudonne,
    catalog_nikulin,
    identity_isometry,
    in_o_plus,
    invariant_lattice,
    make_admissible,
    nikulin_extension,
    product_of_reflections,
    reflection,
    spinor_norm,
)

# Small test lattices of rank <= 4 with plenty of integral isometries.
POOL = [
    build_standard("U"),
    Lattice("Z1+Z-1", ((1, 0), (0, -1))),
    Lattice("Z2+Z-2", ((2, 0), (0, -2))),
    direct_sum(build_standard("U"), build_standard("Z-2")),
    Lattice("diag(1,1,-1,-1)", ((1, 0, 0, 0), (0, 1, 0, 0),
                                (0, 0, -1, 0), (0, 0, 0, -1))),
    direct_sum(build_standard("U"), build_standard("U")),
]


def random_anisotropic(rng, lat, lo=-3, hi=3):
    while True:
        v = tuple(rng.randint(lo, hi) for _ in range(lat.rank))
        if any(v) and lat.norm(v) != 0:
            return v


def random_word(rng, lat, max_mirrors=6):
    mirrors = [random_anisotropic(rng, lat) for _ in range(rng.randint(0, max_mirrors))]
    return product_of_reflections(lat, mirrors), mirrors


def test_isometry_validation():
    u = build_standard("U")
    with pytest.raises(IsometryError):
        Isometry(u, ((1, 1), (0, 1)))  # shear does not preserve the form
    with pytest.raises(IsometryError):
        Isometry(u, ((1, 0),))  # wrong shape
    swap = Isometry(u, ((0, 1), (1, 0)))
    assert swap.is_involution
    assert swap.trace() == 0


def test_reflection_basics():
    lat = Lattice("m", ((2, 0), (0, -2)))
    s = reflection(lat, (0, 1))
    assert s.apply((0, 1)) == (0, -1)
    assert s.apply((1, 0)) == (1, 0)
    assert s.compose(s).matrix == identity_isometry(lat).matrix
    with pytest.raises(IsometryError):
        reflection(build_standard("U"), (1, 0))  # isotropic mirror


def test_reflection_rational_mirror():
    # Mirrors only need nonzero norm, not integrality of the image lattice.
    lat = Lattice("z2", ((2, 0), (0, 2)))
    s = reflection(lat, (Fraction(1, 2), Fraction(1, 2)))
    assert s.apply((1, 1)) == (-1, -1)
    assert s.apply((1, -1)) == (1, -1)


def test_cartan_dieudonne_roundtrip_exact():
    rng = random.Random(301)
    for _ in range(100):
        lat = POOL[rng.randrange(len(POOL))]
        g, _ = random_word(rng, lat)
        mirrors = cartan_dieudonne(g)
        assert len(mirrors) <= 2 * lat.rank
        assert product_of_reflections(lat, mirrors).matrix == g.matrix


def test_cartan_dieudonne_identity_is_empty():
    for lat in POOL:
        assert cartan_dieudonne(identity_isometry(lat)) == []


def test_spinor_norm_of_single_reflection():
    # Positive exactly when the mirror has negative square.
    rng = random.Random(302)
    for _ in range(100):
        lat = POOL[rng.randrange(len(POOL))]
        v = random_anisotropic(rng, lat)
        expected = 1 if lat.norm(v) < 0 else -1
        assert spinor_norm(reflection(lat, v)) == expected


def test_spinor_norm_multiplicative():
    rng = random.Random(303)
    for _ in range(60):
        lat = POOL[rng.randrange(len(POOL))]
        g, _ = random_word(rng, lat)
        h, _ = random_word(rng, lat)
        assert spinor_norm(g.compose(h)) == spinor_norm(g) * spinor_norm(h)


def test_spinor_norm_factorization_independent():
    # The defining factorization is not unique; the sign must not depend on it.
    rng = random.Random(304)
    for _ in range(60):
        lat = POOL[rng.randrange(len(POOL))]
        g, word = random_word(rng, lat)
        direct = 1
        for m in word:
            direct *= 1 if lat.norm(m) < 0 else -1
        assert spinor_norm(g) == direct


def test_spinor_norm_frozen_values():
    u = build_standard("U")
    assert spinor_norm(Isometry(u, ((-1, 0), (0, -1)))) == -1
    neg = Lattice("neg", ((-2, 0), (0, -2)))
    assert spinor_norm(Isometry(neg, ((-1, 0), (0, -1)))) == 1
    assert spinor_norm(identity_isometry(u)) == 1
    assert in_o_plus(identity_isometry(u))
    assert not in_o_plus(Isometry(u, ((-1, 0), (0, -1))))


def test_invariant_lattice_swap_on_u():
    u = build_standard("U")
    fix = invariant_lattice(Isometry(u, ((0, 1), (1, 0))))
    assert fix.basis == ((1, 1),)
    assert fix.induced().gram == ((2,),)
    assert fix.is_primitive


def test_invariant_lattice_is_saturated():
    rng = random.Random(305)
    found = 0
    while found < 30:
        lat = POOL[rng.randrange(len(POOL))]
        g, _ = random_word(rng, lat)
        try:
            fix = invariant_lattice(g)
        except IsometryError:
            continue  # trivial fixed part
        assert fix.is_primitive
        for v in fix.basis:
            assert g.apply(v) == v
        found += 1


def test_invariant_lattice_trivial_raises():
    u = build_standard("U")
    with pytest.raises(IsometryError):
        invariant_lattice(Isometry(u, ((-1, 0), (0, -1))))


def test_catalog_nikulin_zh():
    iota = catalog_nikulin("Zh")
    assert iota.lattice.label == "LK3"
    assert iota.is_involution
    assert iota.trace() == -20
    fix = invariant_lattice(iota)
    assert fix.rank == 1
    assert fix.induced().gram == ((2,),)


def test_catalog_nikulin_u():
    iota = catalog_nikulin("U")
    assert iota.trace() == -18
    fix = invariant_lattice(iota)
    assert fix.rank == 2
    assert fix.induced().gram in (((0, 1), (1, 0)), ((0, -1), (-1, 0)))


def test_catalog_nikulin_unknown():
    with pytest.raises(IsometryError):
        catalog_nikulin("E8")


def test_nikulin_extension_rejects_wrong_action():
    lk3 = build_standard("LK3")
    n = lk3.rank
    h = tuple(1 if i in (16, 17) else 0 for i in range(n))
    m0 = Sublattice(lk3, (h,), label="Zh")
    minus_id = tuple(tuple(-1 if i == j else 0 for j in range(n)) for i in range(n))
    with pytest.raises(IsometryError):
        nikulin_extension(m0, minus_id)  # acts by -1 on M0 itself


def test_nikulin_extension_rejects_non_involution():
    lk3 = build_standard("LK3")
    n = lk3.rank
    h = tuple(1 if i in (16, 17) else 0 for i in range(n))
    m0 = Sublattice(lk3, (h,), label="Zh")
    with pytest.raises(IsometryError):
        nikulin_extension(m0, identity_isometry(lk3).matrix)


def test_make_admissible_zh():
    adm = make_admissible(catalog_nikulin("Zh"))
    assert adm.t == -17
    assert adm.iota.trace() == -19
    assert spinor_norm(adm.iota) == 1
    assert adm.sublattice.rank == 2
    assert adm.sublattice.induced().gram == ((2, 0), (0, -2))
    assert is_hyperbolic(adm.sublattice.induced())
    # Basis spans exactly h and the extra (-2) vector.
    n = adm.ambient.rank
    h = tuple(1 if i in (16, 17) else 0 for i in range(n))
    e = tuple(1 if i == n - 1 else 0 for i in range(n))
    assert sorted(adm.sublattice.basis) == sorted((h, e))


def test_make_admissible_u():
    adm = make_admissible(catalog_nikulin("U"))
    assert adm.t == -15
    assert adm.sublattice.rank == 3


def test_make_admissible_rejects_wrong_lattice():
    u = build_standard("U")
    with pytest.raises(IsometryError):
        make_admissible(identity_isometry(u))
