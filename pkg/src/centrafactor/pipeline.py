"""Per-network orchestration, corpus batch runs, and report serialization.

A network flows through: largest-component extraction (per policy), the
centrality dataset, the correlation matrix and its eigendecomposition,
canonical correlation between the (deg, evc) and (bwc, clc) pairs, and
the factor-model fit. A stage failure (regular graphs produce degenerate
columns, for instance) is recorded in the report and later stages are
skipped; the corpus run always continues.

Everything is deterministic: fixed configs and seeds give byte-identical
JSON, CSV, and SVG outputs, independent of the worker count.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from . import cca as cca_mod
from . import centrality as centrality_mod
from . import efa as efa_mod
from . import linalg
from .cca import CcaResult, Regime
from .efa import FactorModel
from .generators import GeneratorError, GeneratorSpec, generate, parse_generator_token
from .graph import Graph, ParseDiagnostics, largest_connected_component, parse_edge_list

Source = Union[str, GeneratorSpec]

LCC_POLICIES = ("extract", "error")


class ConfigError(ValueError):
    """An analysis configuration value is out of range."""


@dataclass(frozen=True)
class AnalysisConfig:
    """Every knob of the analysis pipeline, with its default.

    ``lcc_policy`` is either "extract" (analyze the largest connected
    component) or "error" (record a stage failure on disconnected input).
    ``seed`` seeds generator sources whose token omits an explicit seed.
    """

    communality_threshold: float = 0.98
    variance_threshold: float = 0.99
    strong_threshold: float = 0.79
    kaiser_normalize: bool = False
    tie_tol: float = 1e-6
    power_tol: float = 1e-10
    power_max_iter: int = 1000
    varimax_tol: float = 1e-10
    varimax_max_sweeps: int = 500
    lcc_policy: str = "extract"
    seed: int = 0

    def validate(self) -> None:
        for name in ("communality_threshold", "variance_threshold", "strong_threshold"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ConfigError(f"{name} must be in (0, 1], got {value}")
        for name in ("tie_tol", "power_tol", "varimax_tol"):
            value = getattr(self, name)
            if not value > 0.0:
                raise ConfigError(f"{name} must be positive, got {value}")
        for name in ("power_max_iter", "varimax_max_sweeps"):
            value = getattr(self, name)
            if not value >= 1:
                raise ConfigError(f"{name} must be at least 1, got {value}")
        if self.lcc_policy not in LCC_POLICIES:
            raise ConfigError(f"lcc_policy must be one of {LCC_POLICIES}")

    def to_dict(self) -> dict:
        return {
            "communality_threshold": self.communality_threshold,
            "variance_threshold": self.variance_threshold,
            "strong_threshold": self.strong_threshold,
            "kaiser_normalize": self.kaiser_normalize,
            "tie_tol": self.tie_tol,
            "power_tol": self.power_tol,
            "power_max_iter": self.power_max_iter,
            "varimax_tol": self.varimax_tol,
            "varimax_max_sweeps": self.varimax_max_sweeps,
            "lcc_policy": self.lcc_policy,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisConfig":
        return cls(**data)


@dataclass
class Diagnostics:
    """Input repairs and analysis warnings attached to one network."""

    self_loops_dropped: int = 0
    duplicates_collapsed: int = 0
    lcc_nodes_removed: int = 0
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "self_loops_dropped": self.self_loops_dropped,
            "duplicates_collapsed": self.duplicates_collapsed,
            "lcc_nodes_removed": self.lcc_nodes_removed,
            "warnings": self.warnings,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Diagnostics":
        return cls(
            self_loops_dropped=data["self_loops_dropped"],
            duplicates_collapsed=data["duplicates_collapsed"],
            lcc_nodes_removed=data["lcc_nodes_removed"],
            warnings=list(data["warnings"]),
        )


@dataclass
class NetworkReport:
    """Everything known about one analyzed network.

    Counts describe the graph actually analyzed (after component
    extraction). Stage failures live in ``errors`` keyed by stage name;
    the corresponding result fields stay None.
    """

    name: str
    node_count: int
    edge_count: int
    diagnostics: Diagnostics
    centrality_summary: dict[str, dict[str, float]] | None = None
    correlation: list[list[float]] | None = None
    eigenvalues: list[float] | None = None
    cca: CcaResult | None = None
    factor_model: FactorModel | None = None
    errors: dict[str, str] = field(default_factory=dict)

    @property
    def loaded(self) -> bool:
        return self.node_count > 0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "diagnostics": self.diagnostics.to_dict(),
            "centrality_summary": self.centrality_summary,
            "correlation": self.correlation,
            "eigenvalues": self.eigenvalues,
            "cca": self.cca.to_dict() if self.cca else None,
            "factor_model": self.factor_model.to_dict() if self.factor_model else None,
            "errors": self.errors,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NetworkReport":
        return cls(
            name=data["name"],
            node_count=data["node_count"],
            edge_count=data["edge_count"],
            diagnostics=Diagnostics.from_dict(data["diagnostics"]),
            centrality_summary=data["centrality_summary"],
            correlation=data["correlation"],
            eigenvalues=data["eigenvalues"],
            cca=CcaResult.from_dict(data["cca"]) if data["cca"] else None,
            factor_model=(
                FactorModel.from_dict(data["factor_model"])
                if data["factor_model"]
                else None
            ),
            errors=dict(data["errors"]),
        )


@dataclass
class CorpusReport:
    """Aggregate over a corpus run, in manifest order.

    ``analyzed_count`` counts networks with both a canonical correlation
    and a factor model; the contingency table and the dominant-factor
    tallies are computed over exactly those networks. A metric tying
    across several factors increments each tying factor's tally, with the
    surplus tracked in ``tie_counts`` so the books still balance.
    """

    networks: list[NetworkReport]
    sorted_ccc: list[dict]
    contingency: dict[str, dict[str, int]]
    dominant_tallies: dict[str, dict[str, int]]
    tie_counts: dict[str, int]
    analyzed_count: int
    config: dict

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "network_count": len(self.networks),
            "analyzed_count": self.analyzed_count,
            "sorted_ccc": self.sorted_ccc,
            "contingency": self.contingency,
            "dominant_tallies": self.dominant_tallies,
            "tie_counts": self.tie_counts,
            "networks": [r.to_dict() for r in self.networks],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CorpusReport":
        return cls(
            networks=[NetworkReport.from_dict(r) for r in data["networks"]],
            sorted_ccc=[dict(item) for item in data["sorted_ccc"]],
            contingency={k: dict(v) for k, v in data["contingency"].items()},
            dominant_tallies={k: dict(v) for k, v in data["dominant_tallies"].items()},
            tie_counts=dict(data["tie_counts"]),
            analyzed_count=data["analyzed_count"],
            config=dict(data["config"]),
        )


def analyze_network(
    g: Graph,
    cfg: AnalysisConfig,
    name: str = "",
    parse_diagnostics: ParseDiagnostics | None = None,
) -> NetworkReport:
    """Run the full per-network pipeline, degrading gracefully.

    Later stages are skipped once a stage fails; whatever succeeded stays
    in the report alongside the error messages.
    """
    cfg.validate()
    diagnostics = Diagnostics(
        self_loops_dropped=parse_diagnostics.self_loops_dropped if parse_diagnostics else 0,
        duplicates_collapsed=parse_diagnostics.duplicates_collapsed if parse_diagnostics else 0,
    )
    errors: dict[str, str] = {}

    if not g.is_connected():
        if cfg.lcc_policy == "error":
            errors["lcc"] = "graph is disconnected and lcc_policy is 'error'"
            return NetworkReport(
                name=name,
                node_count=g.node_count,
                edge_count=g.edge_count,
                diagnostics=diagnostics,
                errors=errors,
            )
        lcc = largest_connected_component(g)
        diagnostics.lcc_nodes_removed = g.node_count - lcc.node_count
        g = lcc

    report = NetworkReport(
        name=name,
        node_count=g.node_count,
        edge_count=g.edge_count,
        diagnostics=diagnostics,
        errors=errors,
    )

    try:
        dataset = centrality_mod.centrality_dataset(
            g, evc_tol=cfg.power_tol, evc_max_iter=cfg.power_max_iter
        )
    except (
        centrality_mod.GraphTooSmallError,
        centrality_mod.DisconnectedGraphError,
        centrality_mod.PowerIterationError,
    ) as exc:
        errors["dataset"] = str(exc)
        return report
    report.centrality_summary = dataset.summary()

    correlation = None
    try:
        correlation = linalg.correlation_matrix(dataset.values, centrality_mod.METRICS)
        report.correlation = correlation.tolist()
    except linalg.DegenerateColumnError as exc:
        errors["correlation"] = str(exc)

    eigen = None
    if correlation is not None:
        try:
            eigen = linalg.jacobi_eigen(correlation)
            report.eigenvalues = list(eigen.eigenvalues)
        except (linalg.NonSymmetricError, linalg.JacobiConvergenceError) as exc:
            errors["eigen"] = str(exc)

    try:
        report.cca = cca_mod.cca_first(
            dataset.values[:, 0:2],
            dataset.values[:, 2:4],
            strong_threshold=cfg.strong_threshold,
        )
    except (linalg.DegenerateColumnError, cca_mod.DegenerateSetError) as exc:
        errors["cca"] = str(exc)

    if eigen is not None:
        try:
            report.factor_model = efa_mod.fit_from_eigen(
                eigen,
                communality_threshold=cfg.communality_threshold,
                variance_threshold=cfg.variance_threshold,
                varimax_tol=cfg.varimax_tol,
                varimax_max_sweeps=cfg.varimax_max_sweeps,
                kaiser_normalize=cfg.kaiser_normalize,
                tie_tol=cfg.tie_tol,
            )
        except efa_mod.ModelNotFoundError as exc:
            errors["factor_model"] = str(exc)

    return report


def source_name(source: Source) -> str:
    return source.token if isinstance(source, GeneratorSpec) else str(source)


def load_manifest(path: str | Path, default_seed: int = 0) -> list[Source]:
    """Read a corpus manifest: one source per line.

    A line is either an edge-list path (resolved relative to the manifest)
    or a ``gen:<model>:<params>[:<seed>]`` token. Blank lines and ``#``
    comments are skipped. Tokens without a seed get ``default_seed`` plus
    their position among the seedless tokens, so they stay distinct.
    """
    path = Path(path)
    sources: list[Source] = []
    seedless = 0
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("gen:"):
            has_seed = line.count(":") == 3
            spec = parse_generator_token(line, default_seed=default_seed + seedless)
            if not has_seed:
                seedless += 1
            sources.append(spec)
        else:
            sources.append(str((path.parent / line).resolve()))
    if not sources:
        raise ValueError(f"manifest {path} lists no sources")
    return sources


def _analyze_source(args: tuple[Source, AnalysisConfig]) -> NetworkReport:
    source, cfg = args
    name = source_name(source)
    parse_diag = None
    try:
        if isinstance(source, GeneratorSpec):
            g = generate(source)
        else:
            g, parse_diag = parse_edge_list(Path(source).read_text(encoding="utf-8"))
    except (OSError, ValueError, GeneratorError) as exc:
        return NetworkReport(
            name=name,
            node_count=0,
            edge_count=0,
            diagnostics=Diagnostics(),
            errors={"load": str(exc)},
        )
    return analyze_network(g, cfg, name=name, parse_diagnostics=parse_diag)


def run_corpus(
    sources: Sequence[Source], cfg: AnalysisConfig, workers: int = 1
) -> CorpusReport:
    """Analyze every source and aggregate, always in source order.

    Per-network analysis is pure, so ``workers`` greater than 1 fans the
    networks out to a process pool without changing any output byte.
    """
    cfg.validate()
    if not sources:
        raise ValueError("need at least one source")
    jobs = [(source, cfg) for source in sources]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_analyze_source, jobs))
    else:
        reports = [_analyze_source(job) for job in jobs]
    return build_corpus_report(reports, cfg)


def build_corpus_report(
    reports: Sequence[NetworkReport], cfg: AnalysisConfig
) -> CorpusReport:
    """Aggregate per-network reports into corpus-level tables."""
    with_ccc = [r for r in reports if r.cca is not None]
    sorted_ccc = [
        {"name": r.name, "ccc": r.cca.ccc}
        for r in sorted(with_ccc, key=lambda r: -r.cca.ccc)
    ]

    factor_range = range(1, 4)
    contingency = {
        regime.value: {str(m): 0 for m in factor_range} for regime in Regime
    }
    tallies = {name: {str(m): 0 for m in factor_range} for name in centrality_mod.METRICS}
    tie_counts = {name: 0 for name in centrality_mod.METRICS}
    analyzed = 0
    for r in reports:
        if r.cca is None or r.factor_model is None:
            continue
        analyzed += 1
        contingency[r.cca.regime.value][str(r.factor_model.m)] += 1
        for metric, factors in r.factor_model.dominant.items():
            for factor in factors:
                tallies[metric][str(factor)] += 1
            tie_counts[metric] += len(factors) - 1

    return CorpusReport(
        networks=list(reports),
        sorted_ccc=sorted_ccc,
        contingency=contingency,
        dominant_tallies=tallies,
        tie_counts=tie_counts,
        analyzed_count=analyzed,
        config=cfg.to_dict(),
    )


def corpus_report_json(report: CorpusReport) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"


SUMMARY_COLUMNS = (
    "name",
    "nodes",
    "edges",
    "ccc",
    "regime",
    "factor_count",
    "min_communality",
    "dominant_deg",
    "dominant_evc",
    "dominant_bwc",
    "dominant_clc",
)


def corpus_summary_csv(report: CorpusReport) -> str:
    """One CSV row per network; blank cells for failed stages."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for r in report.networks:
        fm = r.factor_model
        row = [
            r.name,
            r.node_count,
            r.edge_count,
            repr(r.cca.ccc) if r.cca else "",
            r.cca.regime.value if r.cca else "",
            fm.m if fm else "",
            repr(fm.min_communality()) if fm else "",
        ]
        for metric in centrality_mod.METRICS:
            row.append("+".join(str(f) for f in fm.dominant[metric]) if fm else "")
        writer.writerow(row)
    return buffer.getvalue()


def emit_reports(
    report: CorpusReport,
    out_dir: str | Path,
    formats: Sequence[str] = ("json", "csv"),
) -> dict[str, Path]:
    """Write corpus.json and/or summary.csv under ``out_dir``.

    Returns the written paths keyed by format. I/O errors propagate for
    the caller to map onto its exit code.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: dict[str, Path] = {}
    if "json" in formats:
        path = out_dir / "corpus.json"
        path.write_text(corpus_report_json(report), encoding="utf-8")
        written["json"] = path
    if "csv" in formats:
        path = out_dir / "summary.csv"
        path.write_text(corpus_summary_csv(report), encoding="utf-8")
        written["csv"] = path
    return written


def validate_corpus_report(report: CorpusReport, cfg: AnalysisConfig) -> list[str]:
    """Cross-check every embedded invariant; returns violation messages.

    An empty list means the report is internally consistent: communality
    thresholds honored, factor counts within range, regimes matching their
    canonical correlations, eigenvalue sums on the trace, and aggregate
    tallies balancing against the per-network data.
    """
    problems: list[str] = []
    analyzed = 0
    for r in report.networks:
        where = f"network {r.name!r}"
        if r.eigenvalues is not None and abs(sum(r.eigenvalues) - 4.0) > 1e-9:
            problems.append(f"{where}: eigenvalues sum to {sum(r.eigenvalues)!r}, not 4")
        if r.cca is not None:
            if abs(r.cca.ccc) > 1.0 + 1e-12:
                problems.append(f"{where}: |ccc| exceeds 1")
            expected = cca_mod.classify_regime(r.cca.ccc, cfg.strong_threshold)
            if r.cca.regime is not expected:
                problems.append(f"{where}: regime {r.cca.regime} != {expected}")
            for label, weights in (("x", r.cca.weights_x), ("y", r.cca.weights_y)):
                norm = float(np.linalg.norm(weights))
                if abs(norm - 1.0) > 1e-9:
                    problems.append(f"{where}: weights_{label} norm {norm!r}")
        fm = r.factor_model
        if fm is not None:
            if not 1 <= fm.m <= 3:
                problems.append(f"{where}: factor count {fm.m} out of range")
            if fm.min_communality() < cfg.communality_threshold - 1e-12:
                problems.append(
                    f"{where}: min communality {fm.min_communality()!r} below threshold"
                )
            recomputed = efa_mod.communalities(np.array(fm.loadings))
            if np.max(np.abs(recomputed - np.array(fm.communalities))) > 1e-12:
                problems.append(f"{where}: stored communalities disagree with loadings")
            for metric, factors in fm.dominant.items():
                if not factors or any(not 1 <= f <= fm.m for f in factors):
                    problems.append(f"{where}: bad dominant factors for {metric}")
        if r.cca is not None and fm is not None:
            analyzed += 1
    if analyzed != report.analyzed_count:
        problems.append(
            f"analyzed_count {report.analyzed_count} != recount {analyzed}"
        )
    contingency_total = sum(
        count for row in report.contingency.values() for count in row.values()
    )
    if contingency_total != report.analyzed_count:
        problems.append(
            f"contingency total {contingency_total} != analyzed {report.analyzed_count}"
        )
    for metric, row in report.dominant_tallies.items():
        expected = report.analyzed_count + report.tie_counts[metric]
        if sum(row.values()) != expected:
            problems.append(
                f"dominant tallies for {metric} sum to {sum(row.values())}, expected {expected}"
            )
    return problems
