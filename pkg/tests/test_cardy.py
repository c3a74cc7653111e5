import random

from mtc import hopf, repcat, coend, cardy
from mtc.linalg import Matrix, kron
from mtc.repcat import (trivial_module, regular_module, tensor_obj, dual_obj,
                        direct_sum, hom_basis, simples_data,
                        composition_factors, grothendieck_ring)
from mtc.cardy import (boundary_state, annulus_amplitude,
                       annulus_closed_channel, torus_partition,
                       defect_operator, defect_algebra, sf_fusion_algebra,
                       bulk_two_point, adjunction_maps, cardy_action,
                       boundary_field_content, bulk_field_content,
                       disorder_field_content, coend_carrier_bimodule,
                       nondiagonalizable_defect)


def test_field_content(dz2_coend, dz2_simples):
    cd = dz2_coend
    h = cd.h
    m, n = dz2_simples.simples[0], dz2_simples.simples[1]
    bf = boundary_field_content(m, n)
    assert bf.dim == m.dim * n.dim
    bulk = bulk_field_content(cd)
    assert bulk.module.dim == h.dim
    assert bulk.is_module(cd)
    dis = disorder_field_content(cd, trivial_module(h))
    assert dis.is_module(cd)
    # bulk = disorder(1) under the canonical identification k (x) L = L
    assert dis.module.dim == bulk.module.dim
    assert dis.action == bulk.action
    dis2 = disorder_field_content(cd, dz2_simples.simples[2])
    assert dis2.is_module(cd)


def test_boundary_states(dz2_coend, dz2_simples):
    cd = dz2_coend
    h = cd.h
    one = trivial_module(h)
    # outgoing state of the trivial boundary condition is eta
    assert boundary_state(cd, one, "out").matrix == cd.eta
    # additivity in direct sums
    x = direct_sum(dz2_simples.simples[0], dz2_simples.simples[1])
    assert boundary_state(cd, x, "out").matrix == \
        boundary_state(cd, dz2_simples.simples[0], "out").matrix + \
        boundary_state(cd, dz2_simples.simples[1], "out").matrix
    assert boundary_state(cd, x, "in").matrix == \
        boundary_state(cd, dz2_simples.simples[0], "in").matrix + \
        boundary_state(cd, dz2_simples.simples[1], "in").matrix
    # in/out compatibility: (chi_m . S) . chk_n equals the kappa-transported
    # annulus datum lambda . chk_{m* x n}   [oracle: both sides as exact
    # 1x1 matrices]
    for m in dz2_simples.simples:
        for n in dz2_simples.simples:
            lhs = boundary_state(cd, m, "in").matrix * \
                boundary_state(cd, n, "out").matrix
            rhs = cd.lambda_ * annulus_amplitude(cd, m, n).matrix
            assert lhs == rhs


def test_annulus(dz2_coend, dz2_simples):
    cd = dz2_coend
    h = cd.h
    one = trivial_module(h)
    assert annulus_amplitude(cd, one, one).matrix == cd.eta
    # closed channel = S . open channel
    m, n = dz2_simples.simples[1], dz2_simples.simples[2]
    assert annulus_closed_channel(cd, m, n).matrix == \
        cd.S_transform * annulus_amplitude(cd, m, n).matrix
    # decomposition into composition factors of m* (x) n
    sd = dz2_simples
    for m in sd.simples:
        for n in sd.simples:
            mult = composition_factors(tensor_obj(dual_obj(m), n), sd)
            expect = Matrix.zeros(h.field, h.dim, 1)
            for k, c in enumerate(mult):
                if c:
                    expect = expect + coend.cocharacter(cd, sd.simples[k]) \
                        .matrix.scale(h.field.from_rational(c))
            assert annulus_amplitude(cd, m, n).matrix == expect
    # annulus symmetry under swapping the boundary conditions:
    # S(annulus(m,n)) = annulus(n,m) via the antipode-side symmetry
    for m in sd.simples:
        for n in sd.simples:
            assert cd.antipode_L * annulus_amplitude(cd, m, n).matrix == \
                annulus_amplitude(cd, n, m).matrix


def test_torus_dz2(dz2_ribbon, dz2_coend):
    cartan, rep = torus_partition(dz2_ribbon, with_coend=dz2_coend)
    assert rep.ok
    assert cartan == [[1 if i == j else 0 for j in range(4)] for i in range(4)]


def test_torus_sweedler(sweedler):
    # the Cartan matrix of the Sweedler module category, with certificate
    cartan, rep = torus_partition(sweedler)
    assert rep.ok
    assert cartan == [[1, 1], [1, 1]]


def test_torus_double_sweedler(dsw):
    cartan, rep = torus_partition(dsw)
    assert rep.ok
    total = sum(cartan[u][v] * simples_data(dsw).simples[u].dim *
                simples_data(dsw).simples[v].dim
                for u in range(4) for v in range(4))
    assert total == dsw.dim


def test_carrier_bimodule(dz2):
    t, w, factor_check = coend_carrier_bimodule(dz2)
    assert factor_check()
    assert w.validate()  # full module axioms, affordable at dim 4
    assert t.dim == dz2.dim ** 2


def test_defect_operators(dz2_coend, dz2_simples):
    cd = dz2_coend
    h = cd.h
    f = h.field
    sd = dz2_simples
    one_idx = sd.trivial_index()
    # O_1 = id (chk_1 = eta and unitality)
    op = defect_operator(cd, sd.simples[one_idx])
    assert op.matrix == Matrix.identity(f, h.dim)
    # composition law and both formulas on all pairs, via defect_algebra
    fa, rep, ops = defect_algebra(cd)
    assert rep.ok, str(rep)
    # semisimple here
    assert fa.trace_form_radical_dim() == 0
    # O depends only on composition factors: projective covers decompose
    for i, p in enumerate(sd.projectives):
        mult = composition_factors(p, sd)
        expect = Matrix.zeros(f, h.dim, h.dim)
        for k, c in enumerate(mult):
            if c:
                expect = expect + ops[k].matrix.scale(f.from_rational(c))
        assert defect_operator(cd, p, check=False).matrix == expect
    # nonsplit extension vs factor sum: the regular module
    reg = regular_module(h)
    mult = composition_factors(reg, sd)
    expect = Matrix.zeros(f, h.dim, h.dim)
    for k, c in enumerate(mult):
        expect = expect + ops[k].matrix.scale(f.from_rational(c))
    assert defect_operator(cd, reg, check=False).matrix == expect


def test_sf_fusion_algebra():
    for npairs in [1, 2, 3]:
        fa = sf_fusion_algebra(npairs)
        f = fa.field
        I1, P1, T, PT = range(4)
        c = f.from_rational(2 ** (2 * npairs - 1))
        # [P1]^2 = [1]
        assert fa.constants[P1][P1][I1].is_one()
        assert sum(1 for k in range(4) if not fa.constants[P1][P1][k].is_zero()) == 1
        # [P1][T] = [PT]
        assert fa.constants[P1][T][PT].is_one()
        # [T][T] = [T][PT] = 2^{2N-1}([1]+[P1])
        for rhs in [fa.constants[T][T], fa.constants[T][PT]]:
            assert rhs[I1] == c and rhs[P1] == c
            assert rhs[T].is_zero() and rhs[PT].is_zero()
        # ([T]-[PT])^2 = 0 and non-semisimplicity
        n = [f.zero(), f.zero(), f.one(), -f.one()]
        sq = cardy._fa_mul(fa, n, n)
        assert all(x.is_zero() for x in sq)
        assert fa.trace_form_radical_dim() > 0
        assert fa.verify_associative()
    # N = 1: [T][T] = 2([1]+[P1])
    fa = sf_fusion_algebra(1)
    assert fa.constants[2][2][0] == fa.field.from_rational(2)


def test_adjunction_maps(dz2_coend, dz2_simples):
    cd = dz2_coend
    h = cd.h
    f = h.field
    n = h.dim
    sd = dz2_simples
    x, xb = sd.simples[1], sd.simples[2]
    y, yb = x, xb
    # k = the simple class of x (x) xb, so the Hom spaces are nonzero
    mult = composition_factors(tensor_obj(x, xb), sd)
    k = sd.simples[next(i for i, c in enumerate(mult) if c)]
    phi, psi, counit = adjunction_maps(cd, k)
    rho_x = cardy_action(cd, x, xb)
    rho_y = cardy_action(cd, y, yb)
    fs = hom_basis(tensor_obj(x, xb), k)
    gs = hom_basis(k, tensor_obj(y, yb))
    assert fs and gs
    fm, gm = fs[0], gs[0]
    # phi and psi land in L-module intertwiners
    phi_g = phi(gm, rho_y)
    rho_free = kron(Matrix.identity(f, k.dim), cd.mu)
    assert phi_g.matrix * rho_free == \
        rho_y.matrix * kron(phi_g.matrix, Matrix.identity(f, n))
    psi_f = psi(fm, rho_x)
    assert psi_f.matrix * rho_x.matrix.promote(cd.D_field) == \
        rho_free * kron(psi_f.matrix, Matrix.identity(f, n).promote(cd.D_field))
    # counit . psi = D^{-1} f
    assert counit(psi_f).matrix == fm.matrix.promote(cd.D_field).scale(cd.D.inv())
    # triangle identities for (forget -| - x L): (id x lambda) delta^Lambda = id
    for w in [rho_x, rho_y]:
        dl = cardy.delta_lambda_coaction(cd, w)
        d = w.cod.dim
        assert kron(Matrix.identity(f, d), cd.lambda_) * dl.matrix == \
            Matrix.identity(f, d)
    # free-module triangle: ((id x lambda) x id) delta^Lambda_{k x L} = id
    free = cardy.disorder_field_content(cd, k)
    rho_kl = repcat.Morphism(tensor_obj(tensor_obj(k, cd.carrier), cd.carrier),
                             tensor_obj(k, cd.carrier), free.action)
    dl = cardy.delta_lambda_coaction(cd, rho_kl)
    d = k.dim * n
    assert kron(Matrix.identity(f, d), cd.lambda_) * dl.matrix == \
        Matrix.identity(f, d)
    # phi of the unit-induced map is the regular action map
    one = trivial_module(h)
    phi1, _, _ = adjunction_maps(cd, one)
    gs1 = hom_basis(one, tensor_obj(one, one))
    rho_11 = cardy_action(cd, one, one)
    got = phi1(gs1[0], rho_11)
    assert got.matrix == cd.eps


def test_bulk_two_point_randomized(dz2_coend, dz2_simples):
    """Acceptance criterion 7: both evaluation paths agree on >= 20
    randomized (f, g) pairs."""
    cd = dz2_coend
    sd = dz2_simples
    rng = random.Random(42)
    f = cd.field
    count = 0
    tries = 0
    while count < 20 and tries < 400:
        tries += 1
        xa, xb, ya, yb, k = (rng.choice(sd.simples) for _ in range(5))
        fs = hom_basis(tensor_obj(xa, xb), k)
        gs = hom_basis(k, tensor_obj(ya, yb))
        if not fs or not gs:
            continue
        fvec = fs[0].matrix.scale(f.from_rational(rng.randint(1, 5)))
        for extra in fs[1:]:
            fvec = fvec + extra.matrix.scale(f.from_rational(rng.randint(-3, 3)))
        gvec = gs[0].matrix.scale(f.from_rational(rng.randint(1, 5)))
        for extra in gs[1:]:
            gvec = gvec + extra.matrix.scale(f.from_rational(rng.randint(-3, 3)))
        fm = repcat.Morphism(fs[0].dom, fs[0].cod, fvec)
        gm = repcat.Morphism(gs[0].dom, gs[0].cod, gvec)
        pa, pb, m = bulk_two_point(cd, fm, gm, xa, xb, ya, yb, k)
        assert pa == pb
        count += 1
    assert count >= 20


def test_bulk_two_point_identity_square(dz2_coend, dz2_simples):
    cd = dz2_coend
    sd = dz2_simples
    # X = Y, f g identity-induced through k = X (x) Xbar composition factors
    x, xb = sd.simples[1], sd.simples[2]
    w = tensor_obj(x, xb)
    for k in sd.simples:
        fs = hom_basis(w, k)
        gs = hom_basis(k, w)
        for fm in fs:
            for gm in gs:
                pa, pb, m = bulk_two_point(cd, fm, gm, x, xb, x, xb, k)
                assert pa == pb


def test_no_nondiagonalizable_defect_in_semisimple(dz2_coend):
    assert nondiagonalizable_defect(dz2_coend) is None
