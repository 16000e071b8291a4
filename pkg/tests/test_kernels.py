import pytest
from hypothesis import given
from hypothesis import strategies as st

from bellframe import kernels


def brute_weight(weights, mask):
    return sum(w for i, w in enumerate(weights) if (mask >> i) & 1)


def brute_atoms(nbits, masks):
    classes = {}
    for i in range(nbits):
        key = tuple((m >> i) & 1 for m in masks)
        classes[key] = classes.get(key, 0) | (1 << i)
    return set(classes.values())


@st.composite
def weighted(draw, max_bits=64):
    n = draw(st.integers(1, max_bits))
    weights = draw(st.lists(st.integers(0, 1000), min_size=n, max_size=n))
    return n, weights


@given(weighted(), st.data())
def test_mask_weight_matches_sum(backend, nw, data):
    n, weights = nw
    mask = data.draw(st.integers(0, (1 << n) - 1))
    assert backend.mask_weight(weights, mask) == brute_weight(weights, mask)


@given(st.integers(1, 64), st.data())
def test_refine_gives_fingerprint_classes(backend, n, data):
    masks = data.draw(st.lists(st.integers(0, (1 << n) - 1), max_size=8))
    atoms = backend.refine(n, masks)
    assert set(atoms) == brute_atoms(n, masks)
    # a partition of Ω, ordered by lowest member
    union = 0
    for a in atoms:
        assert a and not union & a
        union |= a
    assert union == (1 << n) - 1
    lows = [a & -a for a in atoms]
    assert lows == sorted(lows)


@given(weighted(max_bits=12), st.data())
def test_screen_matches_cross_multiplication(backend, nw, data):
    n, weights = nw
    full = (1 << n) - 1
    masks = st.lists(st.integers(0, full), min_size=1, max_size=4)
    conds, lefts, rights = data.draw(masks), data.draw(masks), data.draw(masks)
    viol, nulls = backend.screen(weights, conds, lefts, rights)
    expect, expect_nulls = [], 0
    for ci, c in enumerate(conds):
        wc = brute_weight(weights, c)
        if wc == 0:
            expect_nulls += 1
            continue
        for li, x in enumerate(lefts):
            for ri, y in enumerate(rights):
                j, l, r = (brute_weight(weights, m & c) for m in (x & y, x, y))
                if j * wc != l * r:
                    expect.append((ci, li, ri, j, l, r, wc))
    assert list(viol) == expect
    assert nulls == expect_nulls


def test_backends_agree_on_large_weights():
    # products of weights near 2**31 still fit in 64 bits
    weights = [2**30 - 1, 2**29 + 3, 7, 11]
    args = (weights, [0b1111, 0b0011], [0b0101, 0b1010], [0b0110, 0b1001])
    assert kernels.screen(*args) == kernels.python_impl.screen(*args)


def test_dispatch_falls_back_beyond_compiled_limits():
    weights = [1] * 70
    mask = (1 << 70) - 1
    assert kernels.mask_weight(weights, mask) == 70
    assert len(kernels.refine(70, [1 << 69])) == 2
    big = [2**31, 1]
    assert kernels.mask_weight(big, 0b11) == 2**31 + 1


@pytest.mark.skipif(kernels.compiled_impl is None, reason="extension not built")
def test_compiled_rejects_oversized_input():
    with pytest.raises(ValueError):
        kernels.compiled_impl.mask_weight([1] * 65, 1)


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


def test_environment_forces_fallback():
    import os
    import subprocess
    import sys
    env = dict(os.environ, BELLFRAME_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import bellframe; print(bellframe.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
