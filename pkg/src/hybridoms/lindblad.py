"""Steady state of the weakly driven, dissipative hybrid system.

This is a brute-force numerical oracle for the analytic excitation spectrum.
The Hilbert space is ``cavity (n_c) x mechanics (n_b) x TLS (2)``, in that
tensor order, with TLS basis ``(down, up)``.

Frame: the cavity is rotated at the drive frequency, the TLS-MR sector is left
in the lab frame. Its Hamiltonian is time independent because the drive only
touches the cavity, so

    H = -Delta_L c^dag c + omega_b b^dag b - g c^dag c (b + b^dag)
        + (omega_a/2) sigma_z + lam (b sigma_+ + b^dag sigma_-) + eta (c + c^dag)

with ``Delta_L = omega_L - omega_c``. Density matrices are vectorised row-major,
``vec(A rho B) = (A kron B^T) vec(rho)``.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spl

from .overlaps import poisson_cutoff
from .params import SystemParams, derive_params
from .scattering import SpectrumSeries, fingerprint

#: Displaced-state weight that may be cut off by the mechanical truncation.
SUPPORT_TOL = 1e-6
RESIDUAL_TOL = 1e-10


class SolverError(RuntimeError):
    """The steady-state solve failed or produced an unphysical state."""


@dataclass(frozen=True)
class TruncationSpec:
    n_c: int = 3
    n_b: int = 25

    def __post_init__(self):
        if self.n_c < 2:
            raise ValueError("cavity truncation n_c must be >= 2")
        if self.n_b < 1:
            raise ValueError("mechanical truncation n_b must be >= 1")

    @property
    def dim(self) -> int:
        return 2 * self.n_c * self.n_b

    @classmethod
    def parse(cls, text: str) -> "TruncationSpec":
        n_c, n_b = (int(v) for v in text.split(","))
        return cls(n_c, n_b)


def required_mechanical_levels(params: SystemParams, tol: float = SUPPORT_TOL) -> int:
    """Fock levels needed to hold the one-photon displaced vacuum."""
    return poisson_cutoff(derive_params(params).beta, tol) + 1


def check_truncation(params: SystemParams, trunc: TruncationSpec):
    need = required_mechanical_levels(params)
    if trunc.n_b < need:
        raise ValueError(f"n_b={trunc.n_b} is below the displaced-state support ({need} levels)")


def _subsystem_ops(n_b: int):
    b = sp.kron(sp.diags(np.sqrt(np.arange(1.0, n_b)), 1), sp.identity(2), format="csr")
    sm = sp.kron(sp.identity(n_b), sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]])), format="csr")
    sz = sp.kron(sp.identity(n_b), sp.diags([-1.0, 1.0]), format="csr")
    return b, sm, sz


def _tls_mr_hamiltonian(params: SystemParams, n_b: int):
    b, sm, sz = _subsystem_ops(n_b)
    return (params.omega_b * (b.T @ b) + 0.5 * params.omega_a * sz
            + params.lam * (b @ sm.T + b.T @ sm)).tocsr()


def _tls_mr_jumps(params: SystemParams, n_b: int):
    b, sm, _ = _subsystem_ops(n_b)
    rates = [
        (params.gamma_a * (params.n_a + 1), sm),
        (params.gamma_a * params.n_a, sm.T.tocsr()),
        (params.gamma_b * (params.n_b + 1), b),
        (params.gamma_b * params.n_b, b.T.tocsr()),
    ]
    return [(math.sqrt(r), op) for r, op in rates if r > 0]


def system_operators(trunc: TruncationSpec) -> dict:
    """Sparse ``c``, ``b``, ``sigma_-`` and ``sigma_z`` on the full space."""
    b, sm, sz = _subsystem_ops(trunc.n_b)
    ic, isub = sp.identity(trunc.n_c), sp.identity(2 * trunc.n_b)
    c = sp.diags(np.sqrt(np.arange(1.0, trunc.n_c)), 1)
    return {
        "c": sp.kron(c, isub, format="csr"),
        "b": sp.kron(ic, b, format="csr"),
        "sm": sp.kron(ic, sm, format="csr"),
        "sz": sp.kron(ic, sz, format="csr"),
    }


def build_hamiltonian(params: SystemParams, eta: float, delta_l: float, trunc: TruncationSpec):
    """Full driven Hamiltonian (sparse, dimension ``2 n_c n_b``)."""
    if eta < 0:
        raise ValueError("drive amplitude must be non-negative")
    check_truncation(params, trunc)
    ops = system_operators(trunc)
    c, b, sm, sz = ops["c"], ops["b"], ops["sm"], ops["sz"]
    n = c.T @ c
    H = (-delta_l * n + params.omega_b * (b.T @ b) - params.g * (n @ (b + b.T))
         + 0.5 * params.omega_a * sz + params.lam * (b @ sm.T + b.T @ sm) + eta * (c + c.T))
    return H.tocsr()


def jump_operators(params: SystemParams, trunc: TruncationSpec) -> list:
    """Lindblad operators with their rates folded in."""
    ops = system_operators(trunc)
    ic = sp.identity(trunc.n_c)
    out = [math.sqrt(params.kappa) * ops["c"]]
    out += [s * sp.kron(ic, j, format="csr") for s, j in _tls_mr_jumps(params, trunc.n_b)]
    return out


def liouvillian(H, jumps):
    """Row-major vectorised Lindblad generator."""
    dim = H.shape[0]
    eye = sp.identity(dim, format="csr")
    L = -1j * (sp.kron(H, eye) - sp.kron(eye, H.T))
    for J in jumps:
        JdJ = (J.conj().T @ J).tocsr()
        L = L + sp.kron(J, J.conj()) - 0.5 * sp.kron(JdJ, eye) - 0.5 * sp.kron(eye, JdJ.T)
    return L.tocsc()


@dataclass
class SteadyStateResult:
    """Steady state and convergence diagnostics.

    ``rho`` is the dense density matrix in the ``cavity x mechanics x TLS`` basis.
    """

    rho: np.ndarray
    mean_photon_number: float
    residual: float
    trace_defect: float
    hermiticity_defect: float
    min_eigenvalue: float
    iterations: int = 0
    method: str = "block"
    diagnostics: dict = field(default_factory=dict)


def _trace_indices(dim: int) -> np.ndarray:
    return np.arange(dim) * (dim + 1)


def _mean_photons(rho: np.ndarray, trunc: TruncationSpec) -> float:
    d = 2 * trunc.n_b
    diag = np.real(np.diag(rho)).reshape(trunc.n_c, d).sum(axis=1)
    return float(np.dot(np.arange(trunc.n_c), diag))


def _finish(rho, residual, trunc, iterations, method) -> SteadyStateResult:
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    res = SteadyStateResult(
        rho=rho,
        mean_photon_number=_mean_photons(rho, trunc),
        residual=float(residual),
        trace_defect=float(abs(tr - 1)),
        hermiticity_defect=herm,
        min_eigenvalue=float(np.linalg.eigvalsh(rho)[0]),
        iterations=iterations,
        method=method,
    )
    if not np.isfinite(res.residual) or res.residual > RESIDUAL_TOL:
        raise SolverError(f"steady-state residual {res.residual:.3e} exceeds {RESIDUAL_TOL:g}")
    if res.trace_defect > 1e-10:
        raise SolverError(f"steady-state trace defect {res.trace_defect:.3e}")
    if res.min_eigenvalue < -1e-8:
        raise SolverError(f"steady state has eigenvalue {res.min_eigenvalue:.3e}")
    return res


class BlockSolver:
    """Steady-state solver exploiting the cavity-photon block structure.

    The vectorised state is ordered by cavity blocks ``(m, m')``. Each block
    evolves under the TLS-MR generator shifted by the photon numbers; the drive
    couples neighbouring blocks and cavity decay feeds ``(m, m')`` from
    ``(m+1, m'+1)``. The drive-free part is block lower triangular in
    ``m + m'``, which makes an exact preconditioner for GMRES at weak drive.
    Blocks with ``m = m'`` do not depend on the drive detuning; their
    factorisations are reused across a sweep.
    """

    def __init__(self, params: SystemParams, eta: float, trunc: TruncationSpec):
        if eta < 0:
            raise ValueError("drive amplitude must be non-negative")
        if not params.kappa > 0:
            raise SolverError("kappa = 0 leaves the cavity without dissipation; no unique steady state")
        check_truncation(params, trunc)
        self.params, self.eta, self.trunc = params, eta, trunc
        self.ds = 2 * trunc.n_b
        self.D = self.ds * self.ds
        Hs = _tls_mr_hamiltonian(params, trunc.n_b)
        b, _, _ = _subsystem_ops(trunc.n_b)
        X = (b + b.T).tocsr()
        eye = sp.identity(self.ds, format="csr")
        diss = sp.csr_matrix((self.D, self.D), dtype=complex)
        for s, j in _tls_mr_jumps(params, trunc.n_b):
            jdj = (j.T @ j).tocsr()
            diss = diss + s * s * (sp.kron(j, j) - 0.5 * sp.kron(jdj, eye) - 0.5 * sp.kron(eye, jdj.T))
        nc = trunc.n_c
        self._base = {}
        for m in range(nc):
            for mp in range(nc):
                Hm, Hmp = Hs - params.g * m * X, Hs - params.g * mp * X
                blk = -1j * (sp.kron(Hm, eye) - sp.kron(eye, Hmp.T)) + diss
                blk = blk - 0.5 * params.kappa * (m + mp) * sp.identity(self.D)
                self._base[(m, mp)] = blk.tocsc()
        self._tr = np.zeros(self.D, dtype=complex)
        self._tr[_trace_indices(self.ds)] = 1.0
        try:
            self._diag_lu = {(m, m): spl.splu(self._pinned((m, m), 0.0)) for m in range(nc)}
        except RuntimeError as exc:
            raise SolverError("singular Liouvillian, no unique steady state "
                              "(gamma_a or gamma_b may be zero)") from exc

    def _idx(self, m, mp):
        return m * self.trunc.n_c + mp

    def _block(self, key, delta_l):
        m, mp = key
        blk = self._base[key]
        if m != mp:
            # -i(-Delta_L m + Delta_L m') on the diagonal
            blk = blk + 1j * delta_l * (m - mp) * sp.identity(self.D, format="csc")
        return blk

    def _pinned(self, key, delta_l):
        blk = self._block(key, delta_l)
        if key == (0, 0):
            blk = blk.tolil()
            blk[0, :] = self._tr
            blk = blk.tocsc()
        return blk

    def liouvillian(self, delta_l: float):
        """Full generator in block order (unpinned)."""
        nc, eta, kap = self.trunc.n_c, self.eta, self.params.kappa
        nblk = nc * nc
        rows = [[None] * nblk for _ in range(nblk)]
        eye = sp.identity(self.D, format="csr")

        def add(r, c, val):
            rows[r][c] = val * eye if rows[r][c] is None else rows[r][c] + val * eye

        for m in range(nc):
            for mp in range(nc):
                r = self._idx(m, mp)
                rows[r][r] = self._block((m, mp), delta_l)
                if m + 1 < nc and mp + 1 < nc:
                    add(r, self._idx(m + 1, mp + 1), kap * math.sqrt((m + 1) * (mp + 1)))
                if eta:
                    if m + 1 < nc:
                        add(r, self._idx(m + 1, mp), -1j * eta * math.sqrt(m + 1))
                    if m >= 1:
                        add(r, self._idx(m - 1, mp), -1j * eta * math.sqrt(m))
                    if mp + 1 < nc:
                        add(r, self._idx(m, mp + 1), 1j * eta * math.sqrt(mp + 1))
                    if mp >= 1:
                        add(r, self._idx(m, mp - 1), 1j * eta * math.sqrt(mp))
        return sp.bmat(rows, format="csr")

    def _to_dense(self, x):
        nc, ds = self.trunc.n_c, self.ds
        return x.reshape(nc, nc, ds, ds).transpose(0, 2, 1, 3).reshape(nc * ds, nc * ds)

    def solve(self, delta_l: float, rtol: float = 1e-13, maxiter: int = 200) -> SteadyStateResult:
        nc, D, kap = self.trunc.n_c, self.D, self.params.kappa
        L = self.liouvillian(delta_l)
        N = L.shape[0]
        trace_row = np.zeros(N, dtype=complex)
        for m in range(nc):
            trace_row[self._idx(m, m) * D + _trace_indices(self.ds)] = 1.0
        Lp = L.tolil()
        Lp[0, :] = trace_row
        Lp = Lp.tocsr()
        rhs = np.zeros(N, dtype=complex)
        rhs[0] = 1.0

        try:
            lus = dict(self._diag_lu)
            for m in range(nc):
                for mp in range(nc):
                    if m != mp:
                        lus[(m, mp)] = spl.splu(self._pinned((m, mp), delta_l))
        except RuntimeError as exc:
            raise SolverError(f"singular Liouvillian block at Delta_L={delta_l}: {exc}") from exc

        def sl(m, mp):
            k = self._idx(m, mp)
            return slice(k * D, (k + 1) * D)

        def precondition(r):
            z = np.zeros_like(r)
            for s in range(2 * nc - 2, -1, -1):
                for m in range(max(0, s - nc + 1), min(nc, s + 1)):
                    mp = s - m
                    rr = r[sl(m, mp)].copy()
                    if m + 1 < nc and mp + 1 < nc:
                        rr -= kap * math.sqrt((m + 1) * (mp + 1)) * z[sl(m + 1, mp + 1)]
                    z[sl(m, mp)] = lus[(m, mp)].solve(rr)
            return z

        M = spl.LinearOperator(Lp.shape, precondition, dtype=complex)
        count = [0]

        def tick(_):
            count[0] += 1

        x, info = spl.gmres(Lp, rhs, M=M, rtol=rtol, atol=0.0, restart=50, maxiter=maxiter,
                            callback=tick, callback_type="pr_norm")
        if info != 0:
            raise SolverError(f"GMRES did not converge at Delta_L={delta_l} (info={info})")
        residual = np.linalg.norm(L @ x)
        return _finish(self._to_dense(x), residual, self.trunc, count[0], "block")


def _direct_solve(params, eta, delta_l, trunc) -> SteadyStateResult:
    H = build_hamiltonian(params, eta, delta_l, trunc)
    L = liouvillian(H, jump_operators(params, trunc))
    dim = H.shape[0]
    Lp = L.tolil()
    row = np.zeros(dim * dim, dtype=complex)
    row[_trace_indices(dim)] = 1.0
    Lp[0, :] = row
    rhs = np.zeros(dim * dim, dtype=complex)
    rhs[0] = 1.0
    try:
        x = spl.splu(Lp.tocsc()).solve(rhs)
    except RuntimeError as exc:
        raise SolverError(f"singular Liouvillian: {exc}") from exc
    residual = np.linalg.norm(L @ x)
    return _finish(x.reshape(dim, dim), residual, trunc, 0, "direct")


def steady_state(params: SystemParams, eta: float, delta_l: float,
                 trunc: TruncationSpec | None = None, method: str = "block") -> SteadyStateResult:
    """Steady state at drive amplitude ``eta`` and detuning ``delta_l``.

    ``method="direct"`` factorises the full vectorised Liouvillian with sparse
    LU; ``"block"`` (default) uses :class:`BlockSolver`, which agrees with the
    direct solve to solver precision and is about twenty times faster.
    """
    trunc = trunc or TruncationSpec()
    if not params.kappa > 0:
        raise SolverError("kappa = 0 leaves the cavity without dissipation; no unique steady state")
    if method == "direct":
        return _direct_solve(params, eta, delta_l, trunc)
    if method == "block":
        return BlockSolver(params, eta, trunc).solve(delta_l)
    raise ValueError(f"unknown method {method!r}")


def default_workers() -> int:
    """Worker count from ``HYBRIDOMS_THREADS`` (unset or 0 means one per CPU)."""
    raw = os.environ.get("HYBRIDOMS_THREADS", "0").strip() or "0"
    n = int(raw)
    if n < 0:
        raise ValueError("HYBRIDOMS_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def photon_number_sweep(params: SystemParams, eta: float, grid, trunc: TruncationSpec | None = None,
                        workers: int | None = None) -> SpectrumSeries:
    """Steady-state ``<c^dag c>`` at every drive detuning in ``grid``."""
    trunc = trunc or TruncationSpec()
    grid = np.asarray(grid, dtype=float)
    solver = BlockSolver(params, eta, trunc)
    workers = default_workers() if workers is None else workers

    def one(item):
        k, dl = item
        try:
            return solver.solve(float(dl)).mean_photon_number
        except SolverError as exc:
            raise SolverError(f"grid point {k} (Delta_L={dl:.12g}): {exc}") from exc

    items = list(enumerate(grid))
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(one, items))
    else:
        values = [one(it) for it in items]
    values = np.array(values)
    if np.any(values < -1e-12):
        warnings.warn("negative photon number from the steady-state solve", RuntimeWarning, stacklevel=2)
    return SpectrumSeries(grid, np.clip(values, 0.0, None),
                          {"kind": "lindblad", "eta": eta, "n_c": trunc.n_c, "n_b": trunc.n_b,
                           "params": fingerprint(params)})
