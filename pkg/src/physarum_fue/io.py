"""Network JSON files, bundled fixtures and report/trace writers."""

from __future__ import annotations

import csv
import json
from importlib import resources
from pathlib import Path as FsPath
from typing import IO, Iterable

from .errors import ParseError, UnknownFixture, ValidationError
from .network import Link, Network, ODDemand

FIXTURES = ("ramazani4", "ghatee13")
TRACE_HEADER = ("iteration", "link_i", "link_j", "flow", "conductivity")


def _require(entry: dict, key: str, where: str):
    if not isinstance(entry, dict):
        raise ValidationError("expected an object", where)
    if key not in entry:
        raise ValidationError(f"missing field {key!r}", where)
    value = entry[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"field {key!r} must be a number, got {value!r}", f"{where}.{key}")
    return value


def network_from_dict(data: dict) -> Network:
    if not isinstance(data, dict):
        raise ValidationError("top level must be an object")
    for key in ("nodes", "links"):
        if not isinstance(data.get(key), list):
            raise ValidationError(f"missing or non-list {key!r}", key)
    links, demands = [], []
    for k, entry in enumerate(data["links"]):
        where = f"links[{k}]"
        i, j = _require(entry, "i", where), _require(entry, "j", where)
        c0, u = _require(entry, "c0", where), _require(entry, "u", where)
        try:
            links.append(Link(int(i), int(j), float(c0), float(u)))
        except ValidationError as exc:
            raise ValidationError(str(exc), where) from None
    for k, entry in enumerate(data.get("demands", [])):
        where = f"demands[{k}]"
        o, d, q = (_require(entry, key, where) for key in ("o", "d", "q"))
        try:
            demands.append(ODDemand(int(o), int(d), float(q)))
        except ValidationError as exc:
            raise ValidationError(str(exc), where) from None
    return Network(tuple(int(n) for n in data["nodes"]), tuple(links), tuple(demands))


def network_to_dict(network: Network) -> dict:
    return {
        "nodes": list(network.nodes),
        "links": [{"i": l.i, "j": l.j, "c0": l.c0, "u": l.u} for l in network.links],
        "demands": [{"o": d.o, "d": d.d, "q": d.q} for d in network.demands],
    }


def load_network(path) -> Network:
    """Read and validate a network JSON file.

    Raises :class:`ParseError` for malformed JSON (with line and column) and
    :class:`ValidationError` for schema or invariant violations.
    """
    text = FsPath(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return network_from_dict(data)


def write_network(network: Network, path) -> None:
    FsPath(path).write_text(json.dumps(network_to_dict(network), indent=2) + "\n")


def load_fixture(name: str) -> Network:
    if name not in FIXTURES:
        raise UnknownFixture(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
    text = resources.files("physarum_fue").joinpath("fixtures", f"{name}.json").read_text()
    return network_from_dict(json.loads(text))


def write_trace(result, stream: IO[str]) -> int:
    """Write one CSV row per (iteration, link); returns the number of data rows."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    rows = 0
    order = result.network.sorted_link_order()
    for record in result.trace:
        for k in order:
            link = result.network.links[k]
            writer.writerow((record.iteration, link.i, link.j,
                             repr(float(record.flows[k])), repr(float(record.conductivity[k]))))
            rows += 1
    return rows


def report_dict(result, wall_time: float | None = None) -> dict:
    network = result.network
    order = network.sorted_link_order()
    out = {
        "flows": [
            {"i": network.links[k].i, "j": network.links[k].j, "flow": float(result.flows[k]),
             "dynamic_flow": float(result.dynamic_flows[k]),
             "conductivity": float(result.conductivity[k])}
            for k in order
        ],
        "per_od_flows": [
            {"o": od[0], "d": od[1],
             "flows": [{"i": network.links[k].i, "j": network.links[k].j, "flow": float(flux[k])}
                       for k in order]}
            for od, flux in result.per_od_flows.items()
        ],
        "path_costs": [pc.to_json() for pc in result.path_costs],
        "wardrop_gap": result.wardrop_gap,
        "iterations": result.iterations,
        "converged": result.converged,
    }
    if wall_time is not None:
        out["wall_time"] = wall_time
    return out


def format_table(headers: Iterable[str], rows: Iterable[Iterable]) -> str:
    headers = [str(h) for h in headers]
    cells = [[_fmt(c) for c in row] for row in rows]
    widths = [max([len(h)] + [len(r[k]) for r in cells]) for k, h in enumerate(headers)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(headers, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)
