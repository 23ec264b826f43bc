import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magspec.csr import (CsrMatrix, DimensionMismatchError, dump_text,
                         from_dense, from_triplets, identity, load_text,
                         matvec, matvec_reference)


def random_dense(n, m, seed, hermitian=False):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    a[rng.random((n, m)) < 0.4] = 0.0
    if hermitian:
        a = a + a.conj().T
    return a


def test_identity_matvec():
    x = np.array([1.0, 2.0, 3.0], dtype=complex)
    assert np.array_equal(matvec(identity(3), x), x)


def test_zero_matrix_matvec():
    z = from_dense(np.zeros((4, 4), dtype=complex))
    assert np.array_equal(matvec(z, np.ones(4, dtype=complex)), np.zeros(4))


def test_matvec_against_dense_oracle():
    a = random_dense(5, 5, seed=7)
    x = np.arange(1, 6, dtype=complex)
    got = matvec(from_dense(a), x)
    assert np.abs(got - a @ x).max() < 1e-13


def test_matvec_reference_agrees_with_fast_path():
    a = random_dense(9, 6, seed=3)
    x = random_dense(6, 1, seed=4)[:, 0]
    m = from_dense(a)
    assert np.allclose(matvec(m, x), matvec_reference(m, x), atol=1e-13)


def test_dimension_mismatch_raises():
    with pytest.raises(DimensionMismatchError):
        matvec(identity(3), np.ones(4, dtype=complex))


def test_row_offsets_invariants():
    a = from_dense(random_dense(8, 8, seed=1))
    off = np.asarray(a.row_offsets)
    assert len(off) == a.nrows + 1
    assert np.all(np.diff(off) >= 0)
    assert off[-1] == len(a.values)
    for r in range(a.nrows):
        cols = np.asarray(a.col_indices[off[r]:off[r + 1]])
        assert np.all(np.diff(cols) > 0)


def test_hermitian_flagged_assembly_is_exact():
    a = from_dense(random_dense(12, 12, seed=5, hermitian=True),
                   hermitian=True)
    assert a.is_hermitian_exact()
    d = a.to_dense()
    assert np.array_equal(d, d.conj().T)


def test_from_triplets_sums_duplicates():
    a = from_triplets(2, 2, [0, 0, 1], [1, 1, 0], [1.0, 2.0, 5.0])
    assert a.to_dense()[0, 1] == 3.0
    assert a.to_dense()[1, 0] == 5.0


def test_dump_load_roundtrip(tmp_path):
    a = from_dense(random_dense(6, 4, seed=11))
    path = tmp_path / "mat.txt"
    dump_text(a, path)
    first = path.read_text().splitlines()[0].split()
    assert [int(first[0]), int(first[1]), int(first[2])] == [6, 4, a.nnz]
    b = load_text(path)
    assert np.abs(a.to_dense() - b.to_dense()).max() < 1e-12


@settings(deadline=None, max_examples=25)
@given(st.integers(2, 12), st.integers(0, 10_000))
def test_matvec_matches_dense_oracle_property(n, seed):
    a = random_dense(n, n, seed=seed)
    x = random_dense(n, 1, seed=seed + 1)[:, 0]
    assert np.abs(matvec(from_dense(a), x) - a @ x).max() < 1e-12


def test_gershgorin_encloses_spectrum():
    a = random_dense(15, 15, seed=9, hermitian=True)
    m = from_dense(a, hermitian=True)
    lo, hi = m.gershgorin_bounds()
    vals = np.linalg.eigvalsh(a)
    assert lo <= vals.min() + 1e-12 and vals.max() <= hi + 1e-12
