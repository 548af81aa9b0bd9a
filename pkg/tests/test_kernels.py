import os
import subprocess
import sys

import numpy as np
import pytest

import linkpred._kernels as kernels
from linkpred._kernels import pure
from linkpred.oracles import random_graph


def _batch_inputs(g):
    deg = g.degrees().astype(np.float64)
    with np.errstate(divide="ignore"):
        inv = 1.0 / np.log(deg)
    inv[deg < 2.0] = 0.0
    pu, pv = np.triu_indices(g.n_nodes, k=1)
    return g.indptr, g.indices, inv, pu.astype(np.int64), pv.astype(np.int64)


class TestPureKernel:
    def test_hand_example(self):
        # path 0-1-2: jaccard(0,2)=1, dice=1, aa=1/ln 2
        indptr = np.array([0, 1, 3, 4], dtype=np.int32)
        indices = np.array([1, 0, 2, 1], dtype=np.int32)
        inv = np.array([0.0, 1.0 / np.log(2.0), 0.0])
        out = pure.node_similarity_batch(
            indptr, indices, inv, np.array([0]), np.array([2])
        )
        assert out.shape == (1, 3)
        assert out[0, 0] == 1.0
        assert out[0, 1] == 1.0
        assert out[0, 2] == pytest.approx(1.4426950408889634, abs=1e-15)

    def test_empty_batch(self):
        out = pure.node_similarity_batch(
            np.array([0, 0], dtype=np.int32),
            np.empty(0, dtype=np.int32),
            np.zeros(1),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
        )
        assert out.shape == (0, 3)

    def test_disjoint_neighborhoods(self):
        # 0-1, 2-3: pair (0, 2) shares nothing
        indptr = np.array([0, 1, 2, 3, 4], dtype=np.int32)
        indices = np.array([1, 0, 3, 2], dtype=np.int32)
        out = pure.node_similarity_batch(
            indptr, indices, np.zeros(4), np.array([0]), np.array([2])
        )
        assert np.array_equal(out[0], [0.0, 0.0, 0.0])


@pytest.mark.skipif(kernels.BACKEND != "compiled", reason="compiled kernel unavailable")
class TestCompiledKernel:
    def test_bitwise_equal_to_pure(self):
        from linkpred._kernels import _simcore

        rng = np.random.default_rng(23)
        for _ in range(30):
            g = random_graph(int(rng.integers(3, 120)), float(rng.uniform(0.05, 0.4)), rng)
            if g.n_nodes < 2:
                continue
            args = _batch_inputs(g)
            assert np.array_equal(
                _simcore.node_similarity_batch(*args),
                pure.node_similarity_batch(*args),
            )

    def test_active_by_default(self):
        assert kernels.node_similarity_batch is kernels._impl.node_similarity_batch


class TestBackendSelection:
    def _backend_in_subprocess(self, force_pure: bool) -> str:
        env = dict(os.environ)
        if force_pure:
            env["LINKPRED_PURE_PYTHON"] = "1"
        else:
            env.pop("LINKPRED_PURE_PYTHON", None)
        out = subprocess.run(
            [sys.executable, "-c", "import linkpred; print(linkpred.BACKEND)"],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        return out.stdout.strip()

    def test_env_var_forces_pure(self):
        assert self._backend_in_subprocess(force_pure=True) == "python"

    @pytest.mark.skipif(
        kernels.BACKEND != "compiled", reason="compiled kernel unavailable"
    )
    def test_default_is_compiled(self):
        assert self._backend_in_subprocess(force_pure=False) == "compiled"

    def test_zero_means_default(self):
        env = dict(os.environ)
        env["LINKPRED_PURE_PYTHON"] = "0"
        out = subprocess.run(
            [sys.executable, "-c", "import linkpred; print(linkpred.BACKEND)"],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        # "0" must behave exactly like an unset variable
        assert out.stdout.strip() == self._backend_in_subprocess(force_pure=False)
