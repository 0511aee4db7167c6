"""Exact continuous-time simulation via per-edge Poisson proposals.

The culture model is driven by the graphical construction: every oriented
edge proposes at rate 1/2 with a uniform feature draw (thinning) and a
uniform tie-break among disagreeing features. Edges whose weight is 0 or F
cannot produce an accepted proposal, so the engine keeps an active-edge set
and only schedules clocks there; skipped proposals are rejected with
probability 1, so the law is unchanged.

One trajectory uses one RNG stream in a fixed call order, which makes runs
bit-reproducible from the seed. The attached urn (when requested) draws
from a separate substream so trajectories are identical with or without it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    Configuration,
    InvalidInput,
    ModelParams,
    OpinionConfig,
    Topology,
    edge_overlap_count,
)
from .stats import DomainStats, EdgeCensus, census_from_counts, domain_count_from_removed
from .urn import UrnState, urn_coupled_step, urn_init, urn_potentials

AXELROD = "axelrod"
VOTER = "voter"
CVM = "cvm"
MODELS = (AXELROD, VOTER, CVM)


@dataclass(frozen=True)
class GraphicalDraw:
    time: float
    source: int
    target: int
    feature_draw: int  # U, uniform over {0,...,F-1}
    tie_draw: float  # W, uniform over (0,1)


@dataclass(frozen=True)
class UpdateEvent:
    time: float
    target: int
    source: int
    copied_feature: int  # -1 for opinion models
    delta_w: int  # change of total agreement W; flip flag for opinion models


@dataclass(frozen=True)
class StopRule:
    t_max: float | None = None
    max_events: int | None = None
    stop_on_absorption: bool = False

    def __post_init__(self):
        if self.t_max is None and self.max_events is None and not self.stop_on_absorption:
            raise InvalidInput("stop rule needs at least one bound")


@dataclass(frozen=True)
class Snapshot:
    time: float
    census: EdgeCensus
    domains: DomainStats


@dataclass
class Trajectory:
    model: str
    initial: object
    events: list
    snapshots: list
    final: object
    absorbed: bool
    end_time: float
    seed: int
    urn_final: UrnState | None = None
    urn_series: list | None = None  # (event idx, B_0..B_F, w_0, beta, eps)
    urn_b0_violations: int = 0
    urn_potential_violations: int = 0


def propose_and_apply(cfg: Configuration, draw: GraphicalDraw):
    """Apply one graphical draw; returns (configuration, event-or-None).

    Accepted iff the feature draw lands in the agreement set and some
    feature disagrees; the copied feature is the tie-broken element of the
    disagreement set, so acceptance probability equals the shared fraction.
    """
    u, v = draw.source, draw.target
    if not cfg.topology.are_adjacent(u, v):
        raise InvalidInput(f"draw references non-edge ({u},{v})")
    F = cfg.params.F
    if not 0 <= draw.feature_draw < F:
        raise InvalidInput("feature draw out of range")
    if not 0.0 < draw.tie_draw < 1.0:
        raise InvalidInput("tie draw outside (0,1)")
    cu, cv = cfg.cultures[u], cfg.cultures[v]
    disagree = [i for i in range(F) if cu[i] != cv[i]]
    if draw.feature_draw in disagree or not disagree:
        return cfg, None
    k = len(disagree)
    j = min(l for l in range(1, k + 1) if k * draw.tie_draw < l)
    feat = disagree[j - 1]
    new_cultures = list(cfg.cultures)
    cv2 = list(cv)
    cv2[feat] = cu[feat]
    new_cultures[v] = tuple(cv2)
    after = Configuration(cfg.topology, cfg.params, tuple(new_cultures))
    delta = classify_delta_w(cfg, UpdateEvent(draw.time, v, u, feat, -1), after)
    event = UpdateEvent(draw.time, v, u, feat, delta)
    return after, event


def classify_delta_w(before: Configuration, event: UpdateEvent, after: Configuration) -> int:
    """W(after) - W(before) from the at-most-two edges incident to the target."""
    v, u, feat = event.target, event.source, event.copied_feature
    if after.cultures[v][feat] != before.cultures[u][feat]:
        raise InvalidInput("event inconsistent with before/after pair")
    delta = 0
    for z in before.topology.neighbors(v):
        delta += edge_overlap_count(after, v, z) - edge_overlap_count(before, v, z)
    if delta not in (0, 1, 2):
        raise InvalidInput(f"delta_w {delta} outside {{0,1,2}}")
    return delta


def _rng_pair(seed: int):
    ss = np.random.SeedSequence(seed)
    traj_ss, urn_ss = ss.spawn(2)
    return np.random.default_rng(traj_ss), np.random.default_rng(urn_ss)


class _SnapshotTaker:
    def __init__(self, times, kind: str, n_vertices: int):
        self.times = sorted(times)
        self.kind = kind
        self.n_vertices = n_vertices
        self.out: list[Snapshot] = []

    def flush(self, upto: float, counts):
        # Left-limit semantics: called before applying any event at `upto`.
        while self.times and self.times[0] <= upto:
            t = self.times.pop(0)
            census = census_from_counts(counts)
            removed = census.n_edges - census.counts[-1]
            n = domain_count_from_removed(self.kind, removed)
            from fractions import Fraction

            self.out.append(Snapshot(t, census, DomainStats(n, Fraction(self.n_vertices, n))))

    def flush_all(self, counts):
        if self.times:
            self.flush(self.times[-1], counts)


class _ActiveSet:
    """Swap-remove list of active edge indices with O(1) membership updates."""

    def __init__(self, n_edges: int):
        self.items: list[int] = []
        self.pos = [-1] * n_edges

    def __len__(self):
        return len(self.items)

    def set(self, e: int, active: bool):
        p = self.pos[e]
        if active and p < 0:
            self.pos[e] = len(self.items)
            self.items.append(e)
        elif not active and p >= 0:
            last = self.items[-1]
            self.items[p] = last
            self.pos[last] = p
            self.items.pop()
            self.pos[e] = -1


def run_model(model, initial, stop: StopRule, seed: int, snapshot_times=(),
              attach_urn: bool = False, record_urn_series: bool = False) -> Trajectory:
    """Statistically exact trajectory of the chosen generator.

    Deterministic given seed. `snapshot_times` record the state just
    before each requested time.
    """
    if model == AXELROD:
        if not isinstance(initial, Configuration):
            raise InvalidInput("culture model takes a Configuration")
        return _run_axelrod(initial, stop, seed, snapshot_times, attach_urn, record_urn_series)
    if model in (VOTER, CVM):
        if not isinstance(initial, OpinionConfig):
            raise InvalidInput(f"{model} takes an OpinionConfig")
        if attach_urn:
            raise InvalidInput("urn coupling is defined for the culture model only")
        if model == VOTER:
            if set(initial.alphabet) != {0, 1}:
                raise InvalidInput("voter initial must use opinions {0,1}")
            return _run_voter(initial, stop, seed, snapshot_times)
        if set(initial.alphabet) != {-1, 0, 1}:
            raise InvalidInput("cvm initial must use opinions {-1,0,+1}")
        return _run_cvm(initial, stop, seed, snapshot_times)
    raise InvalidInput(f"unknown model {model!r}")


def _run_axelrod(initial, stop, seed, snapshot_times, attach_urn, record_urn_series):
    topo = initial.topology
    F = initial.params.F
    V = topo.n_vertices
    states = [list(c) for c in initial.cultures]
    edges = topo.edges()
    E = len(edges)
    # edge index incident to each vertex (1D: at most two)
    incident = [[] for _ in range(V)]
    for e, (a, b) in enumerate(edges):
        incident[a].append(e)
        incident[b].append(e)

    weight = []
    counts = [0] * (F + 1)
    for a, b in edges:
        w = sum(1 for i in range(F) if states[a][i] == states[b][i])
        weight.append(w)
        counts[w] += 1
    active = _ActiveSet(E)
    for e in range(E):
        active.set(e, 0 < weight[e] < F)

    rng, urn_rng = _rng_pair(seed)
    taker = _SnapshotTaker(snapshot_times, topo.kind, V)

    urn = urn_init(census_from_counts(counts)) if attach_urn else None
    urn_series = [] if (attach_urn and record_urn_series) else None
    b0_viol = 0
    pot_viol = 0

    events: list[UpdateEvent] = []
    t = 0.0
    t_max = stop.t_max if stop.t_max is not None else math.inf
    max_events = stop.max_events if stop.max_events is not None else math.inf

    while True:
        n_active = len(active)
        if n_active == 0:
            absorbed = True
            break
        if len(events) >= max_events:
            absorbed = False
            break
        # Both oriented halves at rate 1/2: undirected edge proposes at rate 1.
        dt = rng.exponential(1.0 / n_active)
        if t + dt > t_max:
            taker.flush(t_max, counts)
            t = t_max
            absorbed = False
            break
        t += dt
        taker.flush(t, counts)
        e = active.items[int(rng.integers(n_active))]
        a, b = edges[e]
        u, v = (a, b) if rng.integers(2) == 0 else (b, a)
        su, sv = states[u], states[v]
        U = int(rng.integers(F))
        if su[U] != sv[U]:
            continue  # proposal thinned away: feature draw in disagreement set
        disagree = [i for i in range(F) if su[i] != sv[i]]
        k = len(disagree)  # >= 1 on an active edge
        feat = disagree[int(k * rng.random())]
        old, new = sv[feat], su[feat]
        delta = 1
        _bump(weight, counts, active, e, 1, F)
        for e2 in incident[v]:
            if e2 == e:
                continue
            za, zb = edges[e2]
            z = zb if za == v else za
            dd = (states[z][feat] == new) - (states[z][feat] == old)
            if dd:
                _bump(weight, counts, active, e2, dd, F)
            delta += dd
        sv[feat] = new
        events.append(UpdateEvent(t, v, u, feat, delta))
        if urn is not None:
            urn = urn_coupled_step(urn, delta, urn_rng)
            beta, eps = urn_potentials(urn, census_from_counts(counts))
            if urn.boxes[0] > counts[0]:
                b0_viol += 1
            if urn.boxes[0] > 0 and beta < eps:
                pot_viol += 1
            if urn_series is not None:
                urn_series.append((len(events) - 1,) + urn.boxes + (counts[0], beta, eps))
        if stop.stop_on_absorption and len(active) == 0:
            absorbed = True
            break

    if absorbed:
        # State is constant from t on; honor any later sample times too.
        end_time = t_max if (stop.t_max is not None and not stop.stop_on_absorption) else t
        taker.flush_all(counts)
    else:
        end_time = t
        taker.flush(end_time, counts)

    final = Configuration(topo, initial.params, tuple(tuple(s) for s in states))
    return Trajectory(AXELROD, initial, events, taker.out, final, absorbed, end_time, seed,
                      urn_final=urn, urn_series=urn_series,
                      urn_b0_violations=b0_viol, urn_potential_violations=pot_viol)


def _bump(weight, counts, active, e, d, F):
    counts[weight[e]] -= 1
    weight[e] += d
    counts[weight[e]] += 1
    active.set(e, 0 < weight[e] < F)


def _run_voter(initial, stop, seed, snapshot_times):
    """Each vertex mimics a uniform neighbor at rate 1; every arrival is logged."""
    topo = initial.topology
    V = topo.n_vertices
    ops = list(initial.opinions)
    edges = topo.edges()
    agree = sum(1 for a, b in edges if ops[a] == ops[b])
    E = len(edges)
    nbrs = [topo.neighbors(x) for x in range(V)]

    rng, _ = _rng_pair(seed)
    taker = _SnapshotTaker(snapshot_times, topo.kind, V)
    events: list[UpdateEvent] = []
    t = 0.0
    t_max = stop.t_max if stop.t_max is not None else math.inf
    max_events = stop.max_events if stop.max_events is not None else math.inf

    while True:
        if stop.stop_on_absorption and agree == E:
            absorbed = True
            break
        if len(events) >= max_events:
            absorbed = agree == E
            break
        dt = rng.exponential(1.0 / V)
        if t + dt > t_max:
            taker.flush(t_max, counts=(E - agree, agree))
            t = t_max
            absorbed = agree == E
            break
        t += dt
        taker.flush(t, counts=(E - agree, agree))
        x = int(rng.integers(V))
        nx = nbrs[x]
        y = nx[int(rng.integers(len(nx)))]
        flipped = ops[x] != ops[y]
        if flipped:
            for z in nx:
                agree += 1 if ops[z] == ops[y] else -1
            ops[x] = ops[y]
        events.append(UpdateEvent(t, x, y, -1, int(flipped)))

    if absorbed:
        taker.flush_all(counts=(E - agree, agree))
    end_time = t
    taker.flush(end_time, counts=(E - agree, agree))
    final = OpinionConfig(topo, tuple(ops), initial.alphabet)
    return Trajectory(VOTER, initial, events, taker.out, final, absorbed, end_time, seed)


def _cvm_edge_active(ops, a, b) -> bool:
    # Interacting pairs are exactly {0, +1} and {0, -1}.
    return ops[a] != ops[b] and ops[a] + ops[b] != 0


def _run_cvm(initial, stop, seed, snapshot_times):
    """Oriented-edge proposals at rate 1/2; extremes never interact."""
    topo = initial.topology
    V = topo.n_vertices
    ops = list(initial.opinions)
    edges = topo.edges()
    E = len(edges)
    incident = [[] for _ in range(V)]
    for e, (a, b) in enumerate(edges):
        incident[a].append(e)
        incident[b].append(e)
    agree = sum(1 for a, b in edges if ops[a] == ops[b])
    active = _ActiveSet(E)
    for e, (a, b) in enumerate(edges):
        active.set(e, _cvm_edge_active(ops, a, b))

    rng, _ = _rng_pair(seed)
    taker = _SnapshotTaker(snapshot_times, topo.kind, V)
    events: list[UpdateEvent] = []
    t = 0.0
    t_max = stop.t_max if stop.t_max is not None else math.inf
    max_events = stop.max_events if stop.max_events is not None else math.inf

    while True:
        if len(active) == 0:
            absorbed = True
            break
        if len(events) >= max_events:
            absorbed = False
            break
        dt = rng.exponential(1.0 / len(active))
        if t + dt > t_max:
            taker.flush(t_max, counts=(E - agree, agree))
            t = t_max
            absorbed = False
            break
        t += dt
        taker.flush(t, counts=(E - agree, agree))
        e = active.items[int(rng.integers(len(active)))]
        a, b = edges[e]
        y, x = (a, b) if rng.integers(2) == 0 else (b, a)  # x mimics y
        ops_x_old = ops[x]
        ops[x] = ops[y]
        for e2 in incident[x]:
            za, zb = edges[e2]
            z = zb if za == x else za
            agree += (ops[z] == ops[x]) - (ops[z] == ops_x_old)
            active.set(e2, _cvm_edge_active(ops, za, zb))
        events.append(UpdateEvent(t, x, y, -1, 1))
        if stop.stop_on_absorption and len(active) == 0:
            absorbed = True
            break

    if absorbed:
        taker.flush_all(counts=(E - agree, agree))
    end_time = t
    taker.flush(end_time, counts=(E - agree, agree))
    final = OpinionConfig(topo, tuple(ops), initial.alphabet)
    return Trajectory(CVM, initial, events, taker.out, final, absorbed, end_time, seed)


def replicate_seed(master_seed: int, r: int) -> int:
    """Independent per-replicate seed derived from (master_seed, r)."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(r,))
    return int(ss.generate_state(1, np.uint64)[0])
