"""Elitist multi-objective evolutionary engine.

The solver follows the NSGA-II template: non-dominated sorting plus
crowding distance drive a binary tournament, variation acts on the
permutation genes (partially matched crossover, scramble sub-list
mutation), and whenever a child's permutation changes its idle vector is
re-drawn and then re-adjusted by the price-driven reallocation heuristic.

Determinism contract: one master seed sequence is split into one child
stream per generation, and every random draw happens in the sequential
variation phase.  Objective evaluation is a pure function of the genes,
so running it across any number of threads returns identical results.
"""

from __future__ import annotations

import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .encoding import Chromosome, allocate_idle, decode, random_chromosome, timing
from .instance import ProblemInstance
from .objectives import BIG_M, ObjectiveVector, eval_power_cost
from .operators import pmx_crossover, scramble_mutation
from .tariff import CostMode
from .validation import check_instance, check_positive_int, check_probability


@dataclass
class Individual:
    chromosome: Chromosome
    objectives: ObjectiveVector
    rank: int = 0
    crowding: float = 0.0


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    front_size: int
    best_f1: float
    best_f2: float
    hypervolume: float


def non_dominated_sort(objectives) -> list[np.ndarray]:
    """Partition points into fronts; front 0 is the non-dominated set.

    Minimization on every column.  A point dominates another when it is no
    worse everywhere and strictly better somewhere.
    """
    pts = np.asarray(objectives, dtype=float)
    if pts.ndim != 2:
        raise ValueError("expected a 2-d array of objective vectors")
    n = pts.shape[0]
    if n == 0:
        return []
    le = (pts[:, None, :] <= pts[None, :, :]).all(axis=2)
    lt = (pts[:, None, :] < pts[None, :, :]).any(axis=2)
    dominates = le & lt
    counts = dominates.sum(axis=0).astype(int)
    remaining = np.ones(n, dtype=bool)
    fronts: list[np.ndarray] = []
    while remaining.any():
        front = np.flatnonzero(remaining & (counts == 0))
        fronts.append(front)
        remaining[front] = False
        counts -= dominates[front].sum(axis=0)
    return fronts


def crowding_distance(front) -> np.ndarray:
    """Crowding distance of each point within one front.

    Per objective the extreme points get +inf and interior points get the
    normalized gap between their neighbours.  Identical objective vectors
    are grouped first so duplicates always share one distance instead of
    splitting a zero-width gap between them.
    """
    pts = np.asarray(front, dtype=float)
    if pts.ndim != 2:
        raise ValueError("expected a 2-d array of objective vectors")
    n = pts.shape[0]
    if n == 0:
        return np.zeros(0)
    uniq, inverse = np.unique(pts, axis=0, return_inverse=True)
    u = uniq.shape[0]
    if u <= 2:
        return np.full(n, np.inf)
    dist = np.zeros(u)
    for col in range(uniq.shape[1]):
        order = np.argsort(uniq[:, col], kind="stable")
        vals = uniq[order, col]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        span = vals[-1] - vals[0]
        if span > 0:
            dist[order[1:-1]] += (vals[2:] - vals[:-2]) / span
    return dist[np.asarray(inverse).ravel()]


def hypervolume_2d(points, reference) -> float:
    """Area dominated by ``points`` and bounded by ``reference`` (both minimized)."""
    pts = np.asarray(points, dtype=float)
    ref = np.asarray(reference, dtype=float)
    if pts.size == 0:
        return 0.0
    pts = pts[(pts[:, 0] < ref[0]) & (pts[:, 1] < ref[1])]
    if pts.size == 0:
        return 0.0
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    area = 0.0
    ceiling = ref[1]
    for f1, f2 in pts[order]:
        if f2 < ceiling:
            area += (ref[0] - f1) * (ceiling - f2)
            ceiling = f2
    return float(area)


class _Evaluator:
    """Pure, reusable objective evaluation for one instance.

    The power cost goes through the same scalar tariff arithmetic as
    ``objectives.eval_power_cost``, so stored objectives reproduce exactly
    when a solution file is re-evaluated.  The jump penalty uses a
    precomputed pairwise matrix; scores are integer-valued, so the matrix
    route agrees with the scalar route to the last bit.
    """

    def __init__(self, instance: ProblemInstance, mode: CostMode, penalty_only: bool):
        self.instance = instance
        self.mode = mode
        self.penalty_only = penalty_only
        slabs = instance.slabs
        self._row = {s.id: i for i, s in enumerate(slabs)}
        n = len(slabs)
        self._penalty = np.zeros((n, n))
        for i, a in enumerate(slabs):
            for j, b in enumerate(slabs):
                if i != j:
                    self._penalty[i, j] = instance.penalties.penalty_between(a, b)

    def jump_penalty(self, units: tuple[tuple[int, ...], ...]) -> float:
        total = 0.0
        for unit in units:
            if len(unit) > 1:
                r = np.fromiter((self._row[sid] for sid in unit), dtype=int, count=len(unit))
                total += float(self._penalty[r[:-1], r[1:]].sum())
        return total

    def evaluate(self, chromosome: Chromosome) -> Individual:
        batch = decode(chromosome.perm, self.instance)
        if not batch.feasible:
            return Individual(chromosome, ObjectiveVector(BIG_M, BIG_M, False))
        if self.penalty_only:
            idle = tuple(0.0 for _ in range(self.instance.unit_count))
        else:
            idle = allocate_idle(batch, self.instance, chromosome.idle)
        timed = timing(batch, idle, self.instance)
        cost = eval_power_cost(timed, self.instance, self.mode)
        return Individual(
            Chromosome(chromosome.perm, idle),
            ObjectiveVector(cost, self.jump_penalty(batch.units), True),
        )


def _resolve_threads(n_jobs: int | None) -> int:
    if n_jobs is not None:
        return max(1, int(n_jobs))
    env = os.environ.get("TOU_SCHED_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


class TouBatchScheduler(BaseEstimator):
    """Two-objective batch scheduler for rolling campaigns under TOU prices.

    Minimizes total electricity cost and total adjacency jump penalty at
    once and keeps an archive of every feasible non-dominated schedule
    found during the run.

    Parameters
    ----------
    population_size : even int, at least 4.
    generations : number of variation/selection rounds; 0 evaluates the
        random initial population only.
    crossover_prob : probability of recombining each parent pair.
    mutation_prob : probability of scrambling each child.
    scramble_max_len : window cap for the scramble mutation; default is a
        tenth of the permutation length (at least 2).
    cost_mode : "proportional" or "start-period" electricity pricing.
    penalty_only : evolve on the jump penalty alone, with no deliberate
        idle time.  This is the price-blind baseline used to measure how
        much load the cost-aware runs shift out of expensive periods.
    n_jobs : evaluation threads; default honours TOU_SCHED_THREADS, else 1.
        Results are identical for any thread count.
    random_state : master seed for the run.
    verbose : when positive, print one progress line per generation.

    Attributes
    ----------
    pareto_front_ : list of Individual, the archive sorted by objectives.
    history_ : list of GenerationStats, one entry per generation.
    reference_point_ : hypervolume reference, fixed when the first
        feasible schedule appears.
    """

    def __init__(
        self,
        population_size: int = 50,
        generations: int = 2000,
        crossover_prob: float = 0.4,
        mutation_prob: float = 0.6,
        scramble_max_len: int | None = None,
        cost_mode: str | CostMode = "proportional",
        penalty_only: bool = False,
        n_jobs: int | None = None,
        random_state: int | None = None,
        verbose: int = 0,
    ):
        self.population_size = population_size
        self.generations = generations
        self.crossover_prob = crossover_prob
        self.mutation_prob = mutation_prob
        self.scramble_max_len = scramble_max_len
        self.cost_mode = cost_mode
        self.penalty_only = penalty_only
        self.n_jobs = n_jobs
        self.random_state = random_state
        self.verbose = verbose

    def _validate(self, instance: ProblemInstance) -> None:
        check_instance(instance)
        check_positive_int("population_size", self.population_size, minimum=4)
        if self.population_size % 2:
            raise ValueError("population_size must be even")
        if self.generations < 0:
            raise ValueError("generations must be non-negative")
        check_probability("crossover_prob", self.crossover_prob)
        check_probability("mutation_prob", self.mutation_prob)
        if self.scramble_max_len is not None and self.scramble_max_len < 2:
            raise ValueError("scramble_max_len must be at least 2")

    def _selection_matrix(self, individuals: list[Individual]) -> np.ndarray:
        pts = np.array([ind.objectives.as_tuple() for ind in individuals])
        if self.penalty_only:
            pts = pts.copy()
            pts[:, 0] = 0.0
        return pts

    def _merge_archive(
        self,
        archive: list[Individual],
        vectors: list[tuple[float, float]],
        candidates: list[Individual],
    ) -> tuple[list[Individual], list[tuple[float, float]]]:
        fresh = [ind for ind in candidates if ind.objectives.feasible]
        if not fresh:
            return archive, vectors
        pool = archive + fresh
        pool_vecs = vectors + [tuple(v) for v in self._selection_matrix(fresh)]
        fronts = non_dominated_sort(np.array(pool_vecs))
        keep_idx = sorted(fronts[0].tolist())
        out: list[Individual] = []
        out_vecs: list[tuple[float, float]] = []
        seen: set[tuple[float, float]] = set()
        for i in keep_idx:
            if pool_vecs[i] in seen:
                continue
            seen.add(pool_vecs[i])
            out.append(pool[i])
            out_vecs.append(pool_vecs[i])
        return out, out_vecs

    def fit(self, X: ProblemInstance, y=None):
        """Run the evolutionary search on one problem instance."""
        instance = X
        self._validate(instance)
        mode = CostMode.coerce(self.cost_mode)
        evaluator = _Evaluator(instance, mode, bool(self.penalty_only))
        threads = _resolve_threads(self.n_jobs)
        seeds = np.random.SeedSequence(self.random_state).spawn(self.generations + 1)
        init_rng = np.random.default_rng(seeds[0])

        executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None

        def run_eval(batch: list[Chromosome]) -> list[Individual]:
            if executor is None or len(batch) < 2:
                return [evaluator.evaluate(c) for c in batch]
            return list(executor.map(evaluator.evaluate, batch))

        try:
            return self._run(instance, run_eval, init_rng, seeds)
        finally:
            if executor is not None:
                executor.shutdown()

    def _run(self, instance, run_eval, init_rng, seeds):
        pop_size = self.population_size
        perm_len = len(instance.slabs) * instance.unit_count
        window = self.scramble_max_len
        if window is None:
            window = max(2, perm_len // 10)

        population = run_eval([random_chromosome(instance, init_rng) for _ in range(pop_size)])

        archive: list[Individual] = []
        archive_vecs: list[tuple[float, float]] = []
        archive, archive_vecs = self._merge_archive(archive, archive_vecs, population)
        self.reference_point_: tuple[float, float] | None = None
        self.history_: list[GenerationStats] = []
        self._record(0, population, archive)

        for gen in range(1, self.generations + 1):
            rng = np.random.default_rng(seeds[gen])
            sel = self._selection_matrix(population)
            fronts = non_dominated_sort(sel)
            rank = np.empty(len(population), dtype=int)
            crowd = np.empty(len(population))
            for fi, front in enumerate(fronts):
                rank[front] = fi + 1
                crowd[front] = crowding_distance(sel[front])

            def better(i: int, j: int) -> int:
                if (rank[i], -crowd[i]) <= (rank[j], -crowd[j]):
                    return i
                return j

            picks = rng.integers(0, pop_size, size=2 * pop_size)
            parents = [better(int(picks[2 * t]), int(picks[2 * t + 1])) for t in range(pop_size)]

            children: list[Individual | Chromosome] = []
            budget = instance.idle_budget_h
            m = instance.unit_count
            for a, b in zip(parents[0::2], parents[1::2]):
                perm_a = population[a].chromosome.perm
                perm_b = population[b].chromosome.perm
                crossed = rng.random() < self.crossover_prob
                if crossed:
                    perm_a, perm_b = pmx_crossover(perm_a, perm_b, rng)
                for perm, src in ((perm_a, a), (perm_b, b)):
                    mutated = rng.random() < self.mutation_prob
                    if mutated:
                        perm = scramble_mutation(perm, rng, window)
                    if crossed or mutated:
                        if budget > 0:
                            idle = tuple(rng.dirichlet(np.ones(m + 1))[:m] * budget)
                        else:
                            idle = tuple(0.0 for _ in range(m))
                        children.append(Chromosome(perm, idle))
                    else:
                        children.append(population[src])

            todo = [c for c in children if isinstance(c, Chromosome)]
            evaluated = iter(run_eval(todo))
            offspring = [c if isinstance(c, Individual) else next(evaluated) for c in children]

            combined = population + offspring
            archive, archive_vecs = self._merge_archive(archive, archive_vecs, offspring)

            sel = self._selection_matrix(combined)
            fronts = non_dominated_sort(sel)
            survivors: list[int] = []
            next_rank: dict[int, int] = {}
            next_crowd: dict[int, float] = {}
            for fi, front in enumerate(fronts):
                dist = crowding_distance(sel[front])
                members = front.tolist()
                if len(survivors) + len(members) > pop_size:
                    room = pop_size - len(survivors)
                    order = sorted(range(len(members)), key=lambda t: (-dist[t], members[t]))
                    members = [members[t] for t in order[:room]]
                    dist = dist[order[:room]]
                for t, idx in enumerate(members):
                    next_rank[idx] = fi + 1
                    next_crowd[idx] = float(dist[t])
                survivors.extend(members)
                if len(survivors) >= pop_size:
                    break
            population = []
            for idx in survivors:
                ind = combined[idx]
                population.append(Individual(ind.chromosome, ind.objectives, next_rank[idx], next_crowd[idx]))

            self._record(gen, population, archive)

        ordered = sorted(
            range(len(archive)),
            key=lambda i: (archive[i].objectives.power_cost_cny, archive[i].objectives.jump_penalty),
        )
        self.pareto_front_ = [archive[i] for i in ordered]
        return self

    def _record(self, gen: int, population: list[Individual], archive: list[Individual]) -> None:
        feas = [ind.objectives.as_tuple() for ind in archive]
        if feas and self.reference_point_ is None:
            seen = [
                ind.objectives.as_tuple()
                for ind in population
                if ind.objectives.feasible
            ] or feas
            arr = np.array(seen)
            self.reference_point_ = (
                float(arr[:, 0].max() * 1.05 + 1.0),
                float(arr[:, 1].max() * 1.05 + 1.0),
            )
        if feas:
            arr = np.array(feas)
            best_f1 = float(arr[:, 0].min())
            best_f2 = float(arr[:, 1].min())
            hv = hypervolume_2d(arr, self.reference_point_)
        else:
            best_f1 = float("nan")
            best_f2 = float("nan")
            hv = 0.0
        if gen == 0:
            front_size = len(non_dominated_sort(self._selection_matrix(population))[0])
        else:
            front_size = sum(1 for ind in population if ind.rank == 1)
        stats = GenerationStats(gen, front_size, best_f1, best_f2, hv)
        self.history_.append(stats)
        if self.verbose:
            print(
                f"gen {stats.generation:5d}  front {stats.front_size:3d}  "
                f"f1 {stats.best_f1:14.2f}  f2 {stats.best_f2:10.1f}  hv {stats.hypervolume:.6g}",
                file=sys.stderr,
            )
