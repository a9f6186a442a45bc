import numpy as np
import pytest

from ffincidence import Form, kernels, mk_field
from ffincidence import _pykernels
from ffincidence.geometry import sqsign_table

BACKENDS = sorted(kernels.BACKENDS)


@pytest.fixture(params=BACKENDS)
def backend(request):
    prev = kernels.BACKEND
    kernels.use(request.param)
    yield request.param
    kernels.use(prev)


def test_compiled_backend_is_built():
    assert "compiled" in kernels.BACKENDS


def _rand_rows(rng, q, n, k):
    return rng.integers(0, q, size=(n, k)).astype(np.int32)


@pytest.mark.parametrize("p,ell", [(3, 1), (7, 1), (3, 2)])
def test_trace_hist_oracle(backend, p, ell):
    ctx = mk_field(p, ell)
    rng = np.random.default_rng(0)
    M, X = _rand_rows(rng, ctx.q, 30, 3), _rand_rows(rng, ctx.q, 40, 3)
    got = kernels.trace_hist(ctx.tables["trmul"], M, X, p)
    for i, m in enumerate(M):
        want = np.zeros(p, dtype=np.int64)
        for x in X:
            want[ctx.trace(ctx.dot(m.tolist(), x.tolist()))] += 1
        assert got[i].tolist() == want.tolist()


@pytest.mark.parametrize("form", [Form.CONE, Form.NORM])
def test_pair_form_hist_and_match_oracle(backend, form):
    ctx = mk_field(5, 2)
    t = ctx.tables
    rng = np.random.default_rng(1)
    X, Y = _rand_rows(rng, ctx.q, 25, 3), _rand_rows(rng, ctx.q, 20, 3)
    sq = sqsign_table(form, 3, ctx)
    hist = kernels.pair_form_hist(X, Y, t["sub"], sq, t["add"])
    target = rng.integers(0, ctx.q, size=len(Y)).astype(np.int32)
    want_hist = np.zeros(ctx.q, dtype=np.int64)
    want_match = 0
    for x in X:
        for j, y in enumerate(Y):
            v = 0
            for c, (a, b) in enumerate(zip(x, y)):
                s = ctx.mul(ctx.sub(a, b), ctx.sub(a, b))
                v = ctx.sub(v, s) if (form is Form.CONE and c == 0) else ctx.add(v, s)
            want_hist[v] += 1
            want_match += v == target[j]
    assert hist.tolist() == want_hist.tolist()
    assert kernels.pair_form_match(X, Y, target, t["sub"], sq, t["add"]) == want_match


def test_shift_member_count_oracle(backend):
    ctx = mk_field(7)
    q, k = 7, 3
    rng = np.random.default_rng(2)
    W = np.unique(_rand_rows(rng, q, 80, k), axis=0)
    E = np.unique(_rand_rows(rng, q, 30, k), axis=0)
    mask = np.zeros(q**k, dtype=np.uint8)
    mask[ctx.vector_index(W)] = 1
    wset = {tuple(w) for w in W.tolist()}
    want = sum(
        1 for w in W.tolist() for e in E.tolist()
        if tuple((a - b) % q for a, b in zip(w, e)) in wset
    )
    assert kernels.shift_member_count(W, E, ctx.tables["sub"], mask, q) == want


def test_empty_inputs(backend):
    ctx = mk_field(3)
    t = ctx.tables
    empty = np.zeros((0, 2), dtype=np.int32)
    assert kernels.trace_hist(t["trmul"], empty, empty, 3).shape == (0, 3)
    sq = sqsign_table(Form.NORM, 2, ctx)
    assert kernels.pair_form_hist(empty, empty, t["sub"], sq, t["add"]).sum() == 0


def test_backends_agree_on_large_block():
    # spans several numpy chunks
    ctx = mk_field(11)
    rng = np.random.default_rng(3)
    X, Y = _rand_rows(rng, 11, 2500, 4), _rand_rows(rng, 11, 2000, 4)
    sq = sqsign_table(Form.CONE, 4, ctx)
    t = ctx.tables
    ref = _pykernels.pair_form_hist(X, Y, t["sub"], sq, t["add"])
    prev = kernels.BACKEND
    try:
        for name in BACKENDS:
            kernels.use(name)
            assert kernels.pair_form_hist(X, Y, t["sub"], sq, t["add"]).tolist() == ref.tolist()
    finally:
        kernels.use(prev)


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.use("fortran")


def test_fallback_selected_without_extension():
    import subprocess
    import sys

    code = (
        "import sys; sys.modules['ffincidence._kernels'] = None\n"
        "from ffincidence import kernels, mk_field, Form\n"
        "from ffincidence.spectrum import spectrum_verify\n"
        "assert kernels.BACKEND == 'numpy' and kernels.BACKENDS == ('numpy',)\n"
        "assert spectrum_verify(Form.CONE, mk_field(3), 4).passed\n"
    )
    subprocess.run([sys.executable, "-c", code], check=True)
