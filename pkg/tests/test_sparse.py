import numpy as np
import pytest

from rcholqr import sparse
from rcholqr.errors import DimensionError, EncUndefined, ParamError, ParseError
from rcholqr.generators import GeneratorSpec, make_t1, make_t2


def csr(dense_rows):
    return sparse.from_dense(np.array(dense_rows, dtype=float))


def test_csr_validation():
    with pytest.raises(DimensionError):
        sparse.CSRMatrix(2, 2, np.array([0, 1, 1]), np.array([5]), np.array([1.0]))
    with pytest.raises(DimensionError):
        sparse.CSRMatrix(1, 3, np.array([0, 2]), np.array([1, 1]), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        sparse.CSRMatrix(1, 1, np.array([0, 1]), np.array([0]), np.array([np.inf]))


def test_profile_all_zero():
    z = sparse.CSRMatrix(10, 3, np.zeros(11, dtype=int), np.array([], dtype=int),
                         np.array([]))
    prof = sparse.profile_sparsity(z)
    assert (prof.v, prof.t1, prof.t2, prof.c) == (0, 0, 0, 0.0)
    assert prof.kind == sparse.T2


def test_profile_arrowhead_stack():
    x = make_t1(GeneratorSpec("t1", sigma=1e-4))
    prof = sparse.profile_sparsity(x)
    assert prof.v == 1 and prof.dense_cols == [0]
    assert prof.t1 == 20000 and prof.t2 == 2000
    assert prof.c == 10.0
    assert prof.kind == sparse.T1


def test_profile_t2_stack():
    x = make_t2(GeneratorSpec("t2", sigma=1e-4))
    prof = sparse.profile_sparsity(x)
    assert prof.v == 0 and prof.kind == sparse.T2
    assert prof.t2 == 3000


def test_profile_row_permutation_invariant():
    rng = np.random.default_rng(0)
    d = (rng.random((30, 4)) < 0.3) * rng.standard_normal((30, 4))
    a = sparse.from_dense(d)
    b = sparse.from_dense(d[rng.permutation(30)])
    pa, pb = sparse.profile_sparsity(a), sparse.profile_sparsity(b)
    assert (pa.v, pa.t1, pa.t2, pa.c, pa.kind) == (pb.v, pb.t1, pb.t2, pb.c, pb.kind)


def test_profile_scale_invariant_class():
    d = np.array([[1.0, 0.0], [2.0, 0.0], [3.0, 1.0]])
    a = sparse.profile_sparsity(sparse.from_dense(d), dense_fraction=0.9)
    b = sparse.profile_sparsity(sparse.from_dense(-2.5 * d), dense_fraction=0.9)
    assert a.kind == b.kind
    assert b.c == 2.5 * a.c


def test_profile_dense_class():
    prof = sparse.profile_sparsity(csr(np.ones((4, 3))))
    assert prof.kind == sparse.DENSE and prof.v == 3


def test_profile_bad_fraction():
    with pytest.raises(ParamError):
        sparse.profile_sparsity(csr(np.ones((2, 2))), dense_fraction=0.0)


def test_spmm_identity():
    rng = np.random.default_rng(1)
    d = rng.standard_normal((4, 5))
    assert np.array_equal(sparse.spmm(csr(np.eye(4)), d), d)


def test_spmm_single_entry():
    s = sparse.CSRMatrix(2, 2, np.array([0, 1, 1]), np.array([1]), np.array([2.0]))
    out = sparse.spmm(s, np.eye(2))
    assert np.array_equal(out, [[0.0, 2.0], [0.0, 0.0]])


def test_spmm_matches_dense_oracle():
    rng = np.random.default_rng(2)
    for _ in range(500):
        m, n, p = (int(v) for v in rng.integers(1, 12, 3))
        d = (rng.random((m, n)) < 0.4) * rng.standard_normal((m, n))
        s = sparse.from_dense(d)
        b = rng.standard_normal((n, p))
        got = sparse.spmm(s, b)
        ref = d @ b
        scale = max(np.linalg.norm(ref), 1e-30)
        assert np.linalg.norm(got - ref) <= 1e-13 * scale


def test_dense_times_sparse_matches_oracle():
    rng = np.random.default_rng(3)
    for _ in range(100):
        m, n, p = (int(v) for v in rng.integers(1, 10, 3))
        d = rng.standard_normal((m, n))
        s_dense = (rng.random((n, p)) < 0.5) * rng.standard_normal((n, p))
        got = sparse.dense_times_sparse(d, sparse.from_dense(s_dense))
        ref = d @ s_dense
        assert np.allclose(got, ref, rtol=1e-13, atol=1e-14)


def test_spmm_dimension_mismatch():
    with pytest.raises(DimensionError):
        sparse.spmm(csr(np.eye(3)), np.ones((2, 2)))


def test_round_trip_exact():
    rng = np.random.default_rng(4)
    d = (rng.random((8, 6)) < 0.5) * rng.standard_normal((8, 6))
    s = sparse.from_dense(d)
    assert np.array_equal(sparse.to_dense(s), d)
    assert sparse.from_dense(sparse.to_dense(s)) == s


def test_from_dense_exact_nnz():
    d = np.array([[0.0, 1.0], [2.0, 0.0]])
    assert sparse.from_dense(d).nnz == 2


def test_round_trip_arrowhead_block():
    x = make_t1(GeneratorSpec("t1", sigma=0.5, block_count=3))
    assert sparse.from_dense(sparse.to_dense(x)) == x


def test_matrix_market_read(tmp_path):
    path = tmp_path / "a.mtx"
    path.write_text("%%MatrixMarket matrix coordinate real general\n"
                    "% comment\n2 2 1\n1 1 3.5\n")
    s = sparse.read_matrix_market(path)
    assert (s.rows, s.cols, s.nnz) == (2, 2, 1)
    assert sparse.to_dense(s)[0, 0] == 3.5


def test_matrix_market_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    d = (rng.random((7, 4)) < 0.6) * rng.standard_normal((7, 4))
    s = sparse.from_dense(d)
    path = tmp_path / "rt.mtx"
    sparse.write_matrix_market(s, path)
    assert sparse.read_matrix_market(path) == s


def test_matrix_market_crlf_and_padding(tmp_path):
    path = tmp_path / "crlf.mtx"
    path.write_bytes(b"%%MatrixMarket matrix coordinate real general\r\n"
                     b"2 2 2\r\n1 1 3.5\r\n% mid\r\n2 2 -1.0\r\n\r\n")
    s = sparse.read_matrix_market(path)
    assert s.nnz == 2
    assert sparse.to_dense(s)[0, 0] == 3.5


def test_matrix_market_entry_count_mismatch(tmp_path):
    path = tmp_path / "extra.mtx"
    path.write_text("%%MatrixMarket matrix coordinate real general\n"
                    "1 1 1\n1 1 1.0\n1 1 2.0\n")
    with pytest.raises(ParseError) as info:
        sparse.read_matrix_market(path)
    assert info.value.line == 4
    path.write_text("%%MatrixMarket matrix coordinate real general\n"
                    "2 2 3\n1 1 1.0\n")
    with pytest.raises(ParseError):
        sparse.read_matrix_market(path)


def test_matrix_market_duplicates_summed(tmp_path):
    path = tmp_path / "dup.mtx"
    path.write_text("%%MatrixMarket matrix coordinate real general\n"
                    "2 2 3\n1 1 1.5\n2 1 1.0\n1 1 2.0\n")
    s = sparse.read_matrix_market(path)
    assert s.nnz == 2
    assert sparse.to_dense(s)[0, 0] == 3.5


def test_matrix_market_rejects_variants(tmp_path):
    for banner in ("%%MatrixMarket matrix coordinate pattern general",
                   "%%MatrixMarket matrix coordinate complex general",
                   "%%MatrixMarket matrix array real general",
                   "%%MatrixMarket matrix coordinate real symmetric"):
        path = tmp_path / "bad.mtx"
        path.write_text(banner + "\n1 1 1\n1 1 1.0\n")
        with pytest.raises(ParseError) as info:
            sparse.read_matrix_market(path)
        assert info.value.line == 1


def test_matrix_market_index_out_of_range(tmp_path):
    path = tmp_path / "oob.mtx"
    path.write_text("%%MatrixMarket matrix coordinate real general\n"
                    "2 2 1\n3 1 1.0\n")
    with pytest.raises(ParseError) as info:
        sparse.read_matrix_market(path)
    assert info.value.line == 3


def test_matrix_market_malformed_entry(tmp_path):
    path = tmp_path / "bad.mtx"
    path.write_text("%%MatrixMarket matrix coordinate real general\n"
                    "2 2 1\n1 x 1.0\n")
    with pytest.raises(ParseError) as info:
        sparse.read_matrix_market(path)
    assert info.value.line == 3


def test_max_abs_and_enc_beta():
    s = csr(np.diag([1.0, -3.0, 2.0]))
    assert sparse.max_abs(s) == 3.0
    col = csr([[3.0], [4.0]])
    assert sparse.enc_beta(col) == pytest.approx(1.28, abs=1e-12)


def test_enc_beta_scale_invariant():
    rng = np.random.default_rng(6)
    d = rng.standard_normal((12, 3))
    a = sparse.enc_beta(sparse.from_dense(d))
    b = sparse.enc_beta(sparse.from_dense(7.0 * d))
    assert b == pytest.approx(a, rel=1e-12)


def test_enc_beta_zero_matrix():
    z = sparse.CSRMatrix(3, 2, np.zeros(4, dtype=int), np.array([], dtype=int),
                         np.array([]))
    with pytest.raises(EncUndefined):
        sparse.enc_beta(z)
