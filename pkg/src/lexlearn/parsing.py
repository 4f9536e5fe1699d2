"""Parsing: soft set-cover over matches by activation optimization.

Each match gets an activation alpha in [0, 1].  The parse error is

    E = c1 * sum_i f(dP_i) + c2 * sum_j f(dS_j)
      + c3 * sum_w alpha_w * pm_bar_w + c4 * sum_w alpha_w * sm_bar_w

where dP_i = 1 - sum_w alpha_w * pm_w[i] is the residual at phoneme
position i, dS_j = m_j - sum_w alpha_w * sm_w[j] is the residual at
distinct-sememe slot j against its multiplicity m_j, and

    f(d) = |d| + epsilon * (1 - 4 * (|d| - 1/2)^2)   for |d| <= 1
    f(d) = d^2                                       otherwise.

The epsilon bump is concave on [-1, 1], so minima prefer residuals pinned
at 0 or +-1: error concentrates instead of smearing across activations.
parse() runs projected gradient descent from a deterministic greedy cover
plus random restarts and keeps the best result; brute_force_parse()
enumerates binary activation vectors and serves as a slow reference.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import LearnerConfig, OracleCapacityError, Utterance, semantic_target
from .rng import stream


@dataclass
class ParseResult:
    error: float
    activations: np.ndarray
    delta_p: np.ndarray
    delta_s: np.ndarray


# Combinatorial polish probes are greedily completed (see _greedy_complete)
# only when the match set is at most this large; completion of every probe
# grows quadratically with the match count, so big parses keep cheap probes.
_COMPLETION_CAP = 16


def penalty_f(delta, epsilon: float = 0.25):
    """Residual penalty; accepts scalars or arrays."""
    delta = np.asarray(delta, dtype=float)
    a = np.abs(delta)
    near = a + epsilon * (1.0 - 4.0 * (a - 0.5) ** 2)
    return np.where(a <= 1.0, near, delta * delta)


def penalty_f_prime(delta, epsilon: float = 0.25):
    """Derivative of penalty_f; the subgradient at 0 and |delta|=1 uses the
    inner branch (0 at the origin)."""
    delta = np.asarray(delta, dtype=float)
    a = np.abs(delta)
    inner = np.sign(delta) * (1.0 - 8.0 * epsilon * (a - 0.5))
    return np.where(a <= 1.0, inner, 2.0 * delta)


def _stack(u: Utterance, matches):
    n = len(matches)
    if n:
        pm = np.stack([m.pm for m in matches])
        sm = np.stack([m.sm for m in matches])
    else:
        pm = np.zeros((0, len(u.phonemes)))
        sm = np.zeros((0, len(u.sememe_ids)))
    pm_bar = np.array([m.pm_bar for m in matches], dtype=float)
    sm_bar = np.array([m.sm_bar for m in matches], dtype=float)
    return pm, sm, pm_bar, sm_bar


def _error(alphas, pm, sm, pm_bar, sm_bar, target_s, config):
    dp = 1.0 - alphas @ pm
    ds = target_s - alphas @ sm
    e = (config.c1 * penalty_f(dp, config.epsilon).sum()
         + config.c2 * penalty_f(ds, config.epsilon).sum()
         + config.c3 * float(alphas @ pm_bar)
         + config.c4 * float(alphas @ sm_bar))
    return float(e), dp, ds


def _gradient(alphas, pm, sm, pm_bar, sm_bar, target_s, config):
    dp = 1.0 - alphas @ pm
    ds = target_s - alphas @ sm
    return (-config.c1 * (pm @ penalty_f_prime(dp, config.epsilon))
            - config.c2 * (sm @ penalty_f_prime(ds, config.epsilon))
            + config.c3 * pm_bar
            + config.c4 * sm_bar)


def parse_error(u: Utterance, matches, activations,
                config: LearnerConfig) -> tuple[float, np.ndarray, np.ndarray]:
    """(E, dP, dS) for the given activations.

    Raises ValueError if any activation falls outside [0, 1] or the vector
    length disagrees with the match list.
    """
    alphas = np.asarray(activations, dtype=float)
    if alphas.shape != (len(matches),):
        raise ValueError(f"expected {len(matches)} activations, got {alphas.shape}")
    if len(alphas) and (alphas.min() < 0.0 or alphas.max() > 1.0):
        raise ValueError("activation out of [0, 1]")
    pm, sm, pm_bar, sm_bar = _stack(u, matches)
    return _error(alphas, pm, sm, pm_bar, sm_bar, semantic_target(u), config)


def _baseline(u: Utterance, config: LearnerConfig) -> ParseResult:
    dp = np.ones(len(u.phonemes))
    ds = semantic_target(u)
    e = (config.c1 * penalty_f(dp, config.epsilon).sum()
         + config.c2 * penalty_f(ds, config.epsilon).sum())
    return ParseResult(float(e), np.zeros(0), dp, ds)


def _greedy_complete(alphas, pm, sm, pm_bar, sm_bar, target_s, config):
    """From the given point, repeatedly turn fully on whichever single
    not-yet-full match lowers the error most, until none strictly does.

    Candidate errors for a whole round are computed in one vectorized sweep:
    raising activation i to one shifts the current residuals by exactly
    (1 - alpha_i) times (pm[i], sm[i]) and adds the rest of its own mismatch
    cost, so no per-candidate matrix product is needed.  Ties are never
    taken, so the loop is strictly monotone.
    """
    alphas = alphas.copy()
    e, dp, ds = _error(alphas, pm, sm, pm_bar, sm_bar, target_s, config)
    barrier = config.c3 * pm_bar + config.c4 * sm_bar
    base_barrier = float(alphas @ barrier)
    for _ in range(len(alphas)):
        gap = 1.0 - alphas
        cand_e = (config.c1 * penalty_f(dp[None, :] - gap[:, None] * pm,
                                        config.epsilon).sum(axis=1)
                  + config.c2 * penalty_f(ds[None, :] - gap[:, None] * sm,
                                          config.epsilon).sum(axis=1)
                  + base_barrier + gap * barrier)
        cand_e[gap == 0.0] = np.inf
        i = int(np.argmin(cand_e))
        if not cand_e[i] < e:
            break
        e = float(cand_e[i])
        dp = dp - gap[i] * pm[i]
        ds = ds - gap[i] * sm[i]
        base_barrier += gap[i] * barrier[i]
        alphas[i] = 1.0
    return alphas


def _greedy_start(pm, sm, pm_bar, sm_bar, target_s, config):
    """Deterministic starting point: a greedy cover built from all-zeros."""
    return _greedy_complete(np.zeros(len(pm_bar)), pm, sm, pm_bar, sm_bar,
                            target_s, config)


def _backtrack(alphas, e, direction, pm, sm, pm_bar, sm_bar, target_s, config):
    """Step along -direction, halving from the base rate until the error
    strictly decreases.  Returns (new_alphas, new_e) or (None, e)."""
    min_step = config.learning_rate * 2.0 ** -20
    step = config.learning_rate
    while step >= min_step:
        stepped = np.clip(alphas - step * direction, 0.0, 1.0)
        e_stepped, _, _ = _error(stepped, pm, sm, pm_bar, sm_bar,
                                 target_s, config)
        if e_stepped < e:
            return stepped, e_stepped
        step *= 0.5
    return None, e


def _descend(alphas, pm, sm, pm_bar, sm_bar, target_s, config):
    # Projected descent with backtracking: each iteration tries a step along
    # the full gradient, halving the rate until the error strictly decreases.
    # A fixed step overshoots and oscillates whenever several matches contend
    # for the same positions; backtracking keeps the error monotone.
    #
    # The kinks of the residual penalty can block the full-gradient step even
    # when moving one activation alone would still help (the joint step
    # disturbs residuals that other activations have pinned at a kink).  When
    # the joint step stalls, a round of single-coordinate backtracking steps
    # runs instead; descent stops only when no coordinate can improve either.
    # Both step kinds are downhill-only, so which basin is reached is decided
    # by the random start, never by jumps across error barriers.
    e, _, _ = _error(alphas, pm, sm, pm_bar, sm_bar, target_s, config)
    n = len(alphas)
    for _ in range(config.max_iterations):
        grad = _gradient(alphas, pm, sm, pm_bar, sm_bar, target_s, config)
        stepped, e_stepped = _backtrack(alphas, e, grad, pm, sm, pm_bar,
                                        sm_bar, target_s, config)
        if stepped is None:
            improved = False
            for i in range(n):
                grad = _gradient(alphas, pm, sm, pm_bar, sm_bar, target_s,
                                 config)
                if grad[i] == 0.0:
                    continue
                direction = np.zeros(n)
                direction[i] = grad[i]
                stepped, e_stepped = _backtrack(alphas, e, direction, pm, sm,
                                                pm_bar, sm_bar, target_s,
                                                config)
                if stepped is not None:
                    alphas, e = stepped, e_stepped
                    improved = True
            if not improved:
                break
            continue
        moved = np.max(np.abs(stepped - alphas))
        alphas, e = stepped, e_stepped
        if moved < config.convergence_tol:
            break
    return alphas


def _polish(alphas, pm, sm, pm_bar, sm_bar, target_s, config):
    """Descend, then probe discrete moves that descent cannot see.

    Several kinds of stationary point trap plain descent here.  Overlapping
    matches contending for the same positions settle into fractional
    consensus (a group of activations summing to one) that no downhill move
    escapes, yet that resolves strictly cheaper in favor of one member: the
    bump in the residual penalty makes concentrated parses cheaper than
    smeared ones.  A match that pays an up-front mismatch or stray-sememe
    cost sits behind an error barrier: pulling it up from zero is locally
    uphill even when having it fully on is globally cheaper, so its basin is
    invisible from most starts.  And two rival covers of the same span can
    each be locally stable although exchanging them helps.

    After descent converges, a fixed family of probes is evaluated: the
    rounded vector, every single-activation snap to 0 or 1, winner-take-all
    resolutions of the fractional group, pair swaps that turn one match
    fully on while turning off an overlapping one, and segmentation moves
    that replace one active match by two overlapping ones (split) or two
    active matches by one spanning both (merge).  On small match sets (at
    most _COMPLETION_CAP) the combinatorial probes are additionally
    completed greedily before being judged, because a probe that breaks
    even on its own often pays off once the uncovered remainder is
    refilled; completion grows too fast with the match count to run on big
    parses.  The strictly best improving probe is applied and descent
    resumes from it; if none improves, the current point stands.  The pass
    is monotone, and exact ties never move, so tie-broken outcomes still
    follow the random start.
    """
    alphas = _descend(alphas, pm, sm, pm_bar, sm_bar, target_s, config)
    e, _, _ = _error(alphas, pm, sm, pm_bar, sm_bar, target_s, config)
    n = len(alphas)
    if n > 1:
        overlap = ((pm @ pm.T + sm @ sm.T) > 0)
    for _ in range(4 * n + 4):
        probe, e_probe = None, e

        def consider(candidate):
            nonlocal probe, e_probe
            e_c, _, _ = _error(candidate, pm, sm, pm_bar, sm_bar, target_s,
                               config)
            if e_c < e_probe:
                probe, e_probe = candidate, e_c

        if n <= _COMPLETION_CAP:
            def consider_completed(candidate):
                consider(_greedy_complete(candidate, pm, sm, pm_bar, sm_bar,
                                          target_s, config))
        else:
            consider_completed = consider

        rounded = np.round(alphas)
        if not np.array_equal(rounded, alphas):
            consider(rounded)
            # The rounding may sit across an error barrier: even when it is
            # not itself an improvement, the point it descends to can be.
            consider(_descend(rounded.copy(), pm, sm, pm_bar, sm_bar,
                              target_s, config))
        for i in range(n):
            for value in (0.0, 1.0):
                if alphas[i] != value:
                    snapped = alphas.copy()
                    snapped[i] = value
                    consider(snapped)
        fractional = np.flatnonzero((alphas > 0.0) & (alphas < 1.0))
        if len(fractional) > 1:
            for i in fractional:
                resolved = alphas.copy()
                resolved[fractional] = 0.0
                resolved[i] = 1.0
                consider_completed(resolved)
                for j in fractional:
                    if j > i:
                        pair = resolved.copy()
                        pair[j] = 1.0
                        consider_completed(pair)
        if n > 1:
            for i in range(n):
                if alphas[i] == 1.0:
                    continue
                for j in np.flatnonzero(overlap[i]):
                    if j != i and alphas[j] > 0.0:
                        swapped = alphas.copy()
                        swapped[i] = 1.0
                        swapped[j] = 0.0
                        consider(swapped)
        if n > 1:
            on = np.flatnonzero(alphas == 1.0)
            off = np.flatnonzero(alphas == 0.0)
            for i in on:
                around = [j for j in off if overlap[i, j]]
                for a, j in enumerate(around):
                    for k in around[a + 1:]:
                        split = alphas.copy()
                        split[i] = 0.0
                        split[j] = split[k] = 1.0
                        consider_completed(split)
            for i in off:
                around = [j for j in on if overlap[i, j]]
                for a, j in enumerate(around):
                    for k in around[a + 1:]:
                        merged = alphas.copy()
                        merged[i] = 1.0
                        merged[j] = merged[k] = 0.0
                        consider_completed(merged)
        if probe is None:
            return alphas
        alphas = _descend(probe, pm, sm, pm_bar, sm_bar, target_s, config)
        e, _, _ = _error(alphas, pm, sm, pm_bar, sm_bar, target_s, config)
    return alphas


def parse(u: Utterance, matches, rng_key, config: LearnerConfig,
          *, workers: int = 1) -> ParseResult:
    """Minimize the parse error over activations in [0, 1]^n.

    Restart 0 starts from a deterministic greedy cover; each later restart r
    draws its starting point from stream(*rng_key, r), so results are
    reproducible regardless of how restarts are scheduled.  When the greedy
    restart already reaches error 0.0 nothing can beat it (ties resolve to
    the earliest restart), so the random restarts are skipped.  The all-zero
    vector is always evaluated as a floor candidate, so the returned error
    never exceeds the no-activation baseline.
    """
    if not matches:
        return _baseline(u, config)
    pm, sm, pm_bar, sm_bar = _stack(u, matches)
    target_s = semantic_target(u)
    key = tuple(rng_key)

    def run(restart: int) -> np.ndarray:
        if restart == 0:
            start = _greedy_start(pm, sm, pm_bar, sm_bar, target_s, config)
        else:
            start = stream(*key, restart).random(len(matches))
        return _polish(start, pm, sm, pm_bar, sm_bar, target_s, config)

    finals = [run(0)]
    e0, _, _ = _error(finals[0], pm, sm, pm_bar, sm_bar, target_s, config)
    if e0 != 0.0 and config.restarts > 1:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                finals += list(pool.map(run, range(1, config.restarts)))
        else:
            finals += [run(r) for r in range(1, config.restarts)]
    finals.append(np.zeros(len(matches)))

    best = None
    for idx, alphas in enumerate(finals):
        e, dp, ds = _error(alphas, pm, sm, pm_bar, sm_bar, target_s, config)
        if best is None or e < best.error:
            best = ParseResult(e, alphas, dp, ds)
    return best


def brute_force_parse(u: Utterance, matches,
                      config: LearnerConfig) -> ParseResult:
    """Exact minimum of the parse error over binary activation vectors.

    Enumerates all 2^n assignments (n <= 20 enforced); ties resolve to the
    lowest bit pattern, with bit k of the pattern feeding match k.
    """
    n = len(matches)
    if n > 20:
        raise OracleCapacityError(f"{n} matches exceed the 2^20 oracle cap")
    if n == 0:
        return _baseline(u, config)
    pm, sm, pm_bar, sm_bar = _stack(u, matches)
    target_s = semantic_target(u)
    bits = np.arange(n)
    best_e = None
    best_idx = 0
    chunk = 1 << 14
    for lo in range(0, 1 << n, chunk):
        idx = np.arange(lo, min(lo + chunk, 1 << n))
        a = ((idx[:, None] >> bits) & 1).astype(float)
        dp = 1.0 - a @ pm
        ds = target_s - a @ sm
        e = (config.c1 * penalty_f(dp, config.epsilon).sum(axis=1)
             + config.c2 * penalty_f(ds, config.epsilon).sum(axis=1)
             + a @ (config.c3 * pm_bar + config.c4 * sm_bar))
        k = int(np.argmin(e))
        if best_e is None or e[k] < best_e:
            best_e = float(e[k])
            best_idx = int(idx[k])
    alphas = ((best_idx >> bits) & 1).astype(float)
    e, dp, ds = _error(alphas, pm, sm, pm_bar, sm_bar, target_s, config)
    return ParseResult(e, alphas, dp, ds)
