"""Brute-force enumeration checks for the analytic claims the hiding engine
relies on. Everything here recomputes from first principles (weighted entropy
sums, minimal-count searches) rather than calling the engine's decision code,
so a bug in the engine cannot hide itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, NEGATIVE, POSITIVE
from .hiding import AllocationProblem
from .induction import Rule, entropy, extract_rules, induce


@dataclass
class OracleVerdict:
    claim: str
    cases_checked: int
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        status = "ok" if self.ok else f"{len(self.violations)} violation(s)"
        return f"{self.claim}: {status} over {self.cases_checked} cases"

    def to_json_dict(self) -> dict:
        return {
            "claim": self.claim,
            "casesChecked": self.cases_checked,
            "ok": self.ok,
            "violations": self.violations,
        }


def enumerate_gain(problem: AllocationProblem) -> list[tuple[int, float]]:
    """G(i) for every allocation i in [0, k], evaluated directly from entropy
    sums (independent of the engine's gain code)."""
    pp, pn = problem.parent.p, problem.parent.n
    total = pp + pn
    parent_entropy = entropy(pp, pn)
    out = []
    for i in range(problem.k + 1):
        lp, ln = problem.left.p, problem.left.n
        rp, rn = problem.right.p, problem.right.n
        if problem.label == POSITIVE:
            lp, rp = lp + i, rp + problem.k - i
        else:
            ln, rn = ln + i, rn + problem.k - i
        weighted = 0.0
        if total:
            weighted = ((lp + ln) / total) * entropy(lp, ln) + (
                (rp + rn) / total
            ) * entropy(rp, rn)
        out.append((i, parent_entropy - weighted))
    return out


def _entropy_table(max_p: int, max_n: int) -> np.ndarray:
    """E[p, n] for all 0 <= p <= max_p, 0 <= n <= max_n."""
    p = np.arange(max_p + 1, dtype=np.float64)[:, None]
    n = np.arange(max_n + 1, dtype=np.float64)[None, :]
    total = p + n
    with np.errstate(divide="ignore", invalid="ignore"):
        fp = np.where(total > 0, p / np.where(total > 0, total, 1), 0.0)
        fn = 1.0 - fp
        table = -(
            np.where(fp > 0, fp * np.log2(np.where(fp > 0, fp, 1)), 0.0)
            + np.where(fn > 0, fn * np.log2(np.where(fn > 0, fn, 1)), 0.0)
        )
    table[0, :] = 0.0
    table[:, 0] = 0.0
    return table


def _bracket_table(limit: int, k_limit: int) -> np.ndarray:
    """F[a, b, j] = (a + b + j) * E(a + j, b): the parent-weighted entropy
    contribution of a child holding (a + j, b) instances.

    G(i) = E(parent) - (F[p1, n1, i] + F[p2, n2, k - i]) / parent_total, so
    comparing G values at fixed parent reduces to comparing bracket sums."""
    etab = _entropy_table(limit + k_limit, limit)
    a = np.arange(limit + 1)[:, None, None]
    b = np.arange(limit + 1)[None, :, None]
    j = np.arange(k_limit + 1)[None, None, :]
    return (a + b + j) * etab[a + j, b]


def _bracket_sums(F: np.ndarray, lo: int, limit: int, k: int) -> np.ndarray:
    """B[p1, n1, p2, n2, i] for branch counts in [lo, limit], i in [0, k]."""
    Fk = F[lo : limit + 1, lo : limit + 1, : k + 1]
    return Fk[:, :, None, None, :] + Fk[None, None, :, :, ::-1]


def _grid_check(
    limit: int,
    k_limit: int,
    tol: float,
    lo: int,
    deficit_of: "callable",
    describe: str,
) -> tuple[int, list[str]]:
    """Shared sweep: for each k and each pending class, compute a per-branch
    deficit array and flag combinations where it exceeds tol * parent_total.

    The pending-class-n case mirrors the class-p case with p- and n-counts
    swapped inside each branch, so it is enumerated by transposing the
    bracket table's first two axes.
    """
    F = _bracket_table(limit, k_limit)
    span = limit - lo + 1
    checked = 0
    violations: list[str] = []
    parent_p = np.arange(1, limit + 1)
    parent_n = np.arange(1, limit + 1)
    for k in range(1, k_limit + 1):
        for cls, Fc in ((POSITIVE, F), (NEGATIVE, np.swapaxes(F, 0, 1))):
            B = _bracket_sums(Fc, lo, limit, k)
            deficit = deficit_of(B, k)
            if deficit is None:
                continue
            checked += limit * limit * span**4
            # T = p + n + k: the tolerance scales with the parent total.
            T = parent_p[:, None] + parent_n[None, :] + k
            flags = deficit[None, None] > tol * T[:, :, None, None, None, None]
            if flags.any():
                for idx in np.argwhere(flags)[:10]:
                    p, n, p1, n1, p2, n2 = idx
                    violations.append(
                        f"{describe}: class={cls} k={k} parent=({p + 1},{n + 1})"
                        f" branches=({p1 + lo},{n1 + lo})/({p2 + lo},{n2 + lo})"
                    )
    return checked, violations


def check_endpoint_max(
    limit: int = 8, k_limit: int = 20, tol: float = 1e-9, lo: int = 1
) -> OracleVerdict:
    """No interior allocation may strictly beat both corners: for every grid
    point, max interior G(i) must not exceed max(G(0), G(k)) beyond tol."""

    def deficit(B: np.ndarray, k: int):
        if k < 2:
            return None
        endpoint_best = np.minimum(B[..., 0], B[..., k])  # lower B = higher G
        interior_best = B[..., 1:k].min(axis=-1)
        return endpoint_best - interior_best

    checked, violations = _grid_check(
        limit, k_limit, tol, lo, deficit, "interior max"
    )
    return OracleVerdict(
        "allocation gain is maximized at a corner", checked, violations
    )


def check_convexity(
    limit: int = 8, k_limit: int = 20, tol: float = 1e-9, lo: int = 1
) -> OracleVerdict:
    """Discrete convexity: every second difference of G must be >= -tol,
    i.e. every second difference of the bracket sum B must be <= tol * T."""

    def deficit(B: np.ndarray, k: int):
        if k < 2:
            return None
        second = B[..., 2:] - 2.0 * B[..., 1:-1] + B[..., :-2]
        return second.max(axis=-1)

    checked, violations = _grid_check(
        limit, k_limit, tol, lo, deficit, "second difference"
    )
    return OracleVerdict("allocation gain is convex in i", checked, violations)


def _vec_minimal_additions(p, n, num, den):
    """Vectorized minimal single-class additions to reach max:min >= num/den
    in some orientation; mirrors the engine's tie rules (fewer first, then
    current majority, then p) but is implemented independently."""
    k_p = np.maximum(0, -((-(num * n - den * p)) // den))
    k_n = np.maximum(0, -((-(num * p - den * n)) // den))
    choose_p = (k_p < k_n) | ((k_p == k_n) & (p >= n))
    k = np.where(choose_p, k_p, k_n)
    return k, choose_p


def check_serial_parallel(
    limit: int = 8, delta_limit: int = 6
) -> OracleVerdict:
    """Grouped restoration never needs more additions than any serial order.

    For every parent (a, b) in [1, limit]^2 and per-branch signed deltas in
    [-delta_limit, delta_limit]^2 per class, compare the additions required
    when both deltas are applied at once against applying them one at a time
    (first restoring the ratio after each) in both orders. States with a
    negative class count anywhere are skipped as unreachable.
    """
    d = np.arange(-delta_limit, delta_limit + 1, dtype=np.int64)
    dp1, dn1, dp2, dn2 = np.meshgrid(d, d, d, d, indexing="ij")
    dp1, dn1, dp2, dn2 = (x.ravel() for x in (dp1, dn1, dp2, dn2))

    checked = 0
    violations: list[str] = []
    for a in range(1, limit + 1):
        for b in range(1, limit + 1):
            num, den = max(a, b), min(a, b)

            def restore(p, n):
                k, choose_p = _vec_minimal_additions(p, n, num, den)
                return k, p + np.where(choose_p, k, 0), n + np.where(choose_p, 0, k)

            valid = (
                (a + dp1 + dp2 >= 0)
                & (b + dn1 + dn2 >= 0)
                & (a + dp1 >= 0)
                & (b + dn1 >= 0)
                & (a + dp2 >= 0)
                & (b + dn2 >= 0)
            )
            parallel, _, _ = restore(a + dp1 + dp2, b + dn1 + dn2)

            k1, p_mid, n_mid = restore(a + dp1, b + dn1)
            k2, _, _ = restore(p_mid + dp2, n_mid + dn2)
            serial_12 = k1 + k2
            # Order two-then-one; intermediate validity follows from `valid`.
            k1b, p_mid, n_mid = restore(a + dp2, b + dn2)
            k2b, _, _ = restore(p_mid + dp1, n_mid + dn1)
            serial_21 = k1b + k2b

            best_serial = np.minimum(serial_12, serial_21)
            flagged = valid & (parallel > best_serial)
            checked += int(valid.sum())
            if flagged.any():
                for idx in np.flatnonzero(flagged)[:10]:
                    violations.append(
                        f"parent=({a},{b}) deltas=({dp1[idx]},{dn1[idx]})"
                        f"/({dp2[idx]},{dn2[idx]}): parallel={parallel[idx]}"
                        f" > serial={best_serial[idx]}"
                    )
    return OracleVerdict(
        "grouped additions never exceed the best serial order",
        checked,
        violations,
    )


def verify_hidden(original: Dataset, sanitized: Dataset, rule: Rule) -> bool:
    """True when re-inducing the sanitized dataset no longer yields `rule`."""
    if original.schema != sanitized.schema:
        raise ValueError("datasets disagree on schema")
    return rule not in extract_rules(induce(sanitized))
