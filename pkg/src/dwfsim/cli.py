"""Command-line driver: time sweeps of correlation measures, filter-strength
optimization, hierarchy tables, success-probability surfaces, and DWF
evolution grids. All commands emit deterministic CSV (LF line endings, '.'
decimal separator, header row) so reruns are byte-identical.
"""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import channels as ch
from . import measures as ms
from .linalg import dm
from .phasespace import canonical_net, dwf as dwf_grid, ns1_net
from .protect import FilterStrengths, optimize_pq, protect_evolve, success_surface
from .states import bell, negative_qubit, negative_qutrit, two_qubit_negative

TWO_QUBIT_LABELS = ("ns1", "ns2", "ns3", "ns3p", "ns3pp", "phi+", "phi-", "psi+", "psi-")
DWF_EXTRA_LABELS = ("qubit-ns1", "qutrit-ns1", "mixed2", "mixed3", "mixed4")

# filter strengths used for the hierarchy tables when filters are on
TABLE_PQ = {
    "ns1": (0.17, 0.54),
    "ns2": (0.05, 0.74),
    "ns3p": (0.05, 0.05),
    "phi+": (0.01, 0.01),
}
TABLE_STATES = ("ns1", "ns2", "ns3p", "phi+")

SWEEP_MEASURES = ("concurrence", "coherence_l1", "discord", "steering_2", "steering_3",
                  "max_fidelity", "fidelity_deviation", "tele_fidelity", "s_max")
TABLE_MEASURES = ("concurrence", "discord", "steering_2", "steering_3",
                  "max_fidelity", "fidelity_deviation")

ORDERING_MARGIN = 1e-3


def two_qubit_state(label: str) -> np.ndarray:
    if label in ("phi+", "phi-", "psi+", "psi-"):
        return dm(bell(label))
    return dm(two_qubit_negative(label))


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _build_channel(cfg) -> ch.Channel:
    kind = cfg.get("channel")
    if kind == "ad":
        if cfg.get("g") is None or cfg.get("gamma") is None:
            raise click.UsageError("channel 'ad' needs --g and --gamma")
        return ch.ad(float(cfg["g"]), float(cfg["gamma"]))
    if kind == "rtn":
        if cfg.get("b") is None or cfg.get("gamma_rtn") is None:
            raise click.UsageError("channel 'rtn' needs --b and --gamma-rtn")
        return ch.rtn(float(cfg["b"]), float(cfg["gamma_rtn"]))
    if kind == "depolarizing":
        if cfg.get("p_depol") is None:
            raise click.UsageError("channel 'depolarizing' needs --p-depol")
        return ch.depolarizing(float(cfg["p_depol"]))
    raise click.UsageError(f"unknown channel {kind!r}; options: ad, rtn, depolarizing")


def _merge_config(config_path, flags: dict, defaults: dict) -> dict:
    """Layer values: explicit flag > config file entry > hard default."""
    cfg = dict(defaults)
    if config_path:
        with open(config_path) as fh:
            loaded = json.load(fh)
        cfg.update({k: v for k, v in loaded.items()})
    cfg.update({k: v for k, v in flags.items() if v is not None})
    return cfg


def _strengths_for(cfg, rho0) -> FilterStrengths | None:
    if cfg.get("auto_pq"):
        best, _ = optimize_pq(rho0, step=0.01)
        return best
    p, q = cfg.get("p"), cfg.get("q")
    if p is None and q is None:
        return None
    return FilterStrengths(float(p or 0.0), float(q or 0.0))


def _evolved(rho0, channel, t, strengths):
    """State at time t and the success probability of the filtered pipeline."""
    if strengths is None:
        ks = ch.kraus_set(channel, 2, t)
        return ch.apply_channel(rho0, ks, "two_local"), 1.0
    out = protect_evolve(rho0, channel, t, strengths)
    return out.state, out.success_probability


def _measure_value(name, rho):
    if name in ("max_fidelity", "fidelity_deviation"):
        try:
            return ms.maximal_fidelity(rho) if name == "max_fidelity" else ms.fidelity_deviation(rho)
        except ms.OutOfDomainError:
            return None
    if name == "concurrence":
        return ms.concurrence(rho)
    if name == "coherence_l1":
        return ms.coherence_l1(rho)
    if name == "discord":
        return ms.discord(rho)
    if name == "steering_2":
        return ms.steering(rho, 2)
    if name == "steering_3":
        return ms.steering(rho, 3)
    if name == "tele_fidelity":
        return ms.teleportation_fidelity(rho)
    if name == "s_max":
        return ms.chsh_smax(rho)
    raise click.UsageError(f"unknown measure {name!r}; options: {', '.join(SWEEP_MEASURES)}")


def _write_csv(path, header, rows):
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


@click.group()
def main():
    """Discrete-phase-space noise and protection experiments."""


_channel_options = [
    click.option("--channel", type=click.Choice(["ad", "rtn", "depolarizing"]), default=None),
    click.option("--g", type=float, default=None, help="AD line width"),
    click.option("--gamma", type=float, default=None, help="AD coupling strength"),
    click.option("--b", type=float, default=None, help="RTN coupling strength"),
    click.option("--gamma-rtn", type=float, default=None, help="RTN fluctuation rate"),
    click.option("--p-depol", type=float, default=None, help="depolarizing probability"),
    click.option("--config", type=click.Path(exists=True), default=None,
                 help="JSON file supplying any of the flag values"),
]


def channel_options(f):
    for opt in reversed(_channel_options):
        f = opt(f)
    return f


@main.command()
@click.option("--state", type=click.Choice(TWO_QUBIT_LABELS), default=None)
@channel_options
@click.option("--p", type=float, default=None, help="weak-measurement strength")
@click.option("--q", type=float, default=None, help="reversal strength")
@click.option("--auto-pq", is_flag=True, default=False,
              help="optimize (p, q) for concurrence at t = 0")
@click.option("--t0", type=float, default=None)
@click.option("--t1", type=float, default=None)
@click.option("--steps", type=int, default=None)
@click.option("--measures", default=None,
              help=f"comma-separated subset of: {','.join(SWEEP_MEASURES)}")
@click.option("--out", type=click.Path(), default=None, required=False)
def sweep(state, channel, g, gamma, b, gamma_rtn, p_depol, config, p, q, auto_pq,
          t0, t1, steps, measures, out):
    """Evolve one state through a channel and tabulate measures against time."""
    cfg = _merge_config(config, {
        "state": state, "channel": channel, "g": g, "gamma": gamma, "b": b,
        "gamma_rtn": gamma_rtn, "p_depol": p_depol, "p": p, "q": q,
        "auto_pq": auto_pq or None, "t0": t0, "t1": t1, "steps": steps,
        "measures": measures, "out": out,
    }, {"t0": 0.0, "t1": 10.0, "steps": 11, "auto_pq": False})
    if cfg.get("state") not in TWO_QUBIT_LABELS:
        raise click.UsageError(f"--state must be one of {', '.join(TWO_QUBIT_LABELS)}")
    if cfg.get("out") is None:
        raise click.UsageError("--out is required")
    t0v, t1v, n = float(cfg["t0"]), float(cfg["t1"]), int(cfg["steps"])
    if not (t1v > t0v >= 0 and n >= 2):
        raise click.UsageError("need t1 > t0 >= 0 and steps >= 2")
    wanted = ([m.strip() for m in cfg["measures"].split(",")] if cfg.get("measures")
              else list(SWEEP_MEASURES))
    for m in wanted:
        if m not in SWEEP_MEASURES:
            raise click.UsageError(f"unknown measure {m!r}; options: {', '.join(SWEEP_MEASURES)}")
    channel_obj = _build_channel(cfg)
    rho0 = two_qubit_state(cfg["state"])
    strengths = _strengths_for(cfg, rho0)
    rows = []
    for t in np.linspace(t0v, t1v, n):
        rho, p_succ = _evolved(rho0, channel_obj, float(t), strengths)
        row = [_fmt(float(t))]
        for m in wanted:
            value = _measure_value(m, rho)
            row.append("" if value is None else _fmt(value))
        row.append(_fmt(p_succ))
        rows.append(row)
    _write_csv(cfg["out"], ["t"] + wanted + ["p_succ"], rows)
    click.echo(f"wrote {len(rows)} rows to {cfg['out']}")


@main.command()
@click.option("--state", type=click.Choice(TWO_QUBIT_LABELS), required=True)
@channel_options
@click.option("--step", type=float, default=0.01, show_default=True)
@click.option("--out", type=click.Path(), required=True)
def optimize(state, channel, g, gamma, b, gamma_rtn, p_depol, config, step, out):
    """Grid-search the filter strengths maximizing concurrence at t = 0."""
    rho0 = two_qubit_state(state)
    best, value = optimize_pq(rho0, step=step)
    outcome = protect_evolve(rho0, None, 0.0, best)
    _write_csv(out, ["state", "p", "q", "objective", "p_succ"],
               [[state, _fmt(best.p), _fmt(best.q), _fmt(value),
                 _fmt(outcome.success_probability)]])
    click.echo(f"{state}: optimum {value:.6f} at p={best.p:.2f} q={best.q:.2f}")


def hierarchy_rows(channel_obj, reference_t: float, filters_on: bool,
                   margin: float = ORDERING_MARGIN):
    """Measure values for the four table states at the reference time, ordered.

    Returns a list of (measure, [(state, value), ...], [relations]) with the
    states sorted by value (descending, except fidelity deviation which sorts
    ascending) and '>' / '<' between neighbors replaced by '~' when the gap is
    inside the margin.
    """
    values = {}
    for label in TABLE_STATES:
        rho0 = two_qubit_state(label)
        strengths = FilterStrengths(*TABLE_PQ[label]) if filters_on else None
        rho, _ = _evolved(rho0, channel_obj, reference_t, strengths)
        for m in TABLE_MEASURES:
            values.setdefault(m, {})[label] = _measure_value(m, rho)
    out = []
    for m in TABLE_MEASURES:
        vals = values[m]
        if any(v is None for v in vals.values()):
            ordered = sorted(vals.items(), key=lambda kv: (kv[1] is None, kv[0]))
            out.append((m, ordered, ["?"] * (len(ordered) - 1)))
            continue
        ascending = m == "fidelity_deviation"
        ordered = sorted(vals.items(), key=lambda kv: kv[1], reverse=not ascending)
        rel = []
        for (_, va), (_, vb) in zip(ordered, ordered[1:]):
            gap = abs(va - vb)
            rel.append("~" if gap <= margin else ("<" if ascending else ">"))
        out.append((m, ordered, rel))
    return out


@main.command()
@channel_options
@click.option("--t", "reference_t", type=float, default=10.0, show_default=True,
              help="reference time for the hierarchy")
@click.option("--filters", type=click.Choice(["on", "off"]), required=True)
@click.option("--out", type=click.Path(), required=True)
def table(channel, g, gamma, b, gamma_rtn, p_depol, config, reference_t, filters, out):
    """Rank the four reference states per measure at one evolution time."""
    cfg = _merge_config(config, {"channel": channel, "g": g, "gamma": gamma, "b": b,
                                 "gamma_rtn": gamma_rtn, "p_depol": p_depol}, {})
    channel_obj = _build_channel(cfg)
    rows = []
    for m, ordered, rel in hierarchy_rows(channel_obj, reference_t, filters == "on"):
        for rank, (label, value) in enumerate(ordered, start=1):
            rows.append([m, str(rank), label,
                         "" if value is None else _fmt(value),
                         rel[rank - 1] if rank <= len(rel) else ""])
    _write_csv(out, ["measure", "rank", "state", "value", "relation"], rows)
    click.echo(f"wrote hierarchy for t={reference_t} to {out}")


@main.command()
@click.option("--state", type=click.Choice(TWO_QUBIT_LABELS), required=True)
@channel_options
@click.option("--t", "at_t", type=float, required=True)
@click.option("--step", type=float, default=0.05, show_default=True)
@click.option("--out", type=click.Path(), required=True)
def surface(state, channel, g, gamma, b, gamma_rtn, p_depol, config, at_t, step, out):
    """Success probability of the filtered pipeline over the (p, q) grid."""
    cfg = _merge_config(config, {"channel": channel, "g": g, "gamma": gamma, "b": b,
                                 "gamma_rtn": gamma_rtn, "p_depol": p_depol}, {})
    channel_obj = _build_channel(cfg)
    rho0 = two_qubit_state(state)
    ps, qs, grid = success_surface(rho0, channel_obj, at_t, step)
    rows = [[_fmt(float(p)), _fmt(float(q)), _fmt(float(grid[i, j]))]
            for i, p in enumerate(ps) for j, q in enumerate(qs)]
    _write_csv(out, ["p", "q", "p_succ"], rows)
    click.echo(f"wrote {len(rows)} grid cells to {out}")


def _dwf_initial(label: str):
    """Initial state and net for a DWF evolution run."""
    if label in TWO_QUBIT_LABELS:
        return two_qubit_state(label), 4
    if label == "qubit-ns1":
        return negative_qubit(), 2
    if label == "qutrit-ns1":
        return negative_qutrit(), 3
    if label == "mixed2":
        return np.eye(2, dtype=complex) / 2, 2
    if label == "mixed3":
        return np.eye(3, dtype=complex) / 3, 3
    if label == "mixed4":
        return np.eye(4, dtype=complex) / 4, 4
    raise click.UsageError(
        f"unknown state {label!r}; options: {', '.join(TWO_QUBIT_LABELS + DWF_EXTRA_LABELS)}")


@main.command(name="dwf")
@click.option("--state", default=None,
              help=f"one of {', '.join(TWO_QUBIT_LABELS + DWF_EXTRA_LABELS)}")
@channel_options
@click.option("--net", type=click.Choice(["canonical", "ns1"]), default="canonical",
              show_default=True, help="two-qubit net variant")
@click.option("--t0", type=float, default=0.0, show_default=True)
@click.option("--t1", type=float, default=10.0, show_default=True)
@click.option("--steps", type=int, default=11, show_default=True)
@click.option("--out", type=click.Path(), required=True)
def dwf_cmd(state, channel, g, gamma, b, gamma_rtn, p_depol, config, net, t0, t1, steps, out):
    """Track every discrete Wigner value of an evolving state."""
    cfg = _merge_config(config, {"state": state, "channel": channel, "g": g, "gamma": gamma,
                                 "b": b, "gamma_rtn": gamma_rtn, "p_depol": p_depol}, {})
    channel_obj = _build_channel(cfg)
    rho0, dim = _dwf_initial(cfg.get("state"))
    net_obj = ns1_net() if (net == "ns1" and dim == 4) else canonical_net(dim)
    times = [float(t0)] if steps == 1 or t1 == t0 else list(np.linspace(t0, t1, steps))
    rows = []
    for t in times:
        if dim == 4:
            ks = ch.kraus_set(channel_obj, 2, t)
            rho = ch.apply_channel(rho0, ks, "two_local")
        else:
            ks = ch.kraus_set(channel_obj, dim, t)
            rho = ch.apply_channel(rho0, ks, "single")
        grid = dwf_grid(rho, net_obj)
        flat = [grid.values[qq, pp] for qq in range(dim) for pp in range(dim)]
        rows.append([_fmt(t)] + [_fmt(v) for v in flat] + [_fmt(float(sum(flat)))])
    header = (["t"] + [f"w_{qq + 1}_{pp + 1}" for qq in range(dim) for pp in range(dim)]
              + ["norm"])
    _write_csv(out, header, rows)
    click.echo(f"wrote {len(rows)} time points to {out}")


if __name__ == "__main__":
    sys.exit(main())
