"""JSON interchange for impact graphs.

Schema (all identifiers are strings):

    {
      "attack_graph": {
        "nodes": [...],
        "edges": [{"from": v1, "to": v2, "prob": p}, ...],
        "entry_nodes": [...],
        "attacker_node": "A"
      },
      "dependency_graph": {
        "nodes": [...],
        "edges": [{"dependent": h1, "supplier": h2}, ...],
        "dep_fn": {node: "redundancy" | "degraded" | "strict"},
        "services": [{"node": h, "utility": u}, ...]
      },
      "eta": [{"vuln": v, "component": h, "value": x}, ...]
    }
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .graphs import AttackGraph, DependencyGraph, DepKind, ImpactAssessmentGraph


class GraphFormatError(ValueError):
    """Malformed graph document; the message carries the JSON path."""


def _require(mapping: Any, key: str, path: str) -> Any:
    if not isinstance(mapping, dict):
        raise GraphFormatError(f"{path}: expected an object")
    if key not in mapping:
        raise GraphFormatError(f"{path}: missing key {key!r}")
    return mapping[key]

def _check_keys(mapping: dict, allowed: set[str], path: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise GraphFormatError(f"{path}: unknown keys {sorted(unknown)}")


def iag_from_dict(doc: dict) -> ImpactAssessmentGraph:
    _check_keys(doc, {"attack_graph", "dependency_graph", "eta"}, "$")
    ag_doc = _require(doc, "attack_graph", "$")
    _check_keys(ag_doc, {"nodes", "edges", "entry_nodes", "attacker_node"}, "$.attack_graph")
    edges = []
    edge_prob = {}
    for i, e in enumerate(_require(ag_doc, "edges", "$.attack_graph")):
        path = f"$.attack_graph.edges[{i}]"
        _check_keys(e, {"from", "to", "prob"}, path)
        pair = (str(_require(e, "from", path)), str(_require(e, "to", path)))
        edges.append(pair)
        edge_prob[pair] = float(_require(e, "prob", path))
    ag = AttackGraph(
        nodes=frozenset(str(n) for n in _require(ag_doc, "nodes", "$.attack_graph")),
        edges=tuple(edges),
        entry_nodes=frozenset(str(n) for n in _require(ag_doc, "entry_nodes", "$.attack_graph")),
        attacker_node=str(_require(ag_doc, "attacker_node", "$.attack_graph")),
        edge_prob=edge_prob,
    )

    dg_doc = _require(doc, "dependency_graph", "$")
    _check_keys(dg_doc, {"nodes", "edges", "dep_fn", "services"}, "$.dependency_graph")
    dg_edges = []
    for i, e in enumerate(_require(dg_doc, "edges", "$.dependency_graph")):
        path = f"$.dependency_graph.edges[{i}]"
        _check_keys(e, {"dependent", "supplier"}, path)
        dg_edges.append((str(_require(e, "dependent", path)), str(_require(e, "supplier", path))))
    dep_fn = {}
    for node, kind in _require(dg_doc, "dep_fn", "$.dependency_graph").items():
        try:
            dep_fn[str(node)] = DepKind(kind)
        except ValueError:
            raise GraphFormatError(
                f"$.dependency_graph.dep_fn[{node!r}]: unknown kind {kind!r}"
            ) from None
    services = {}
    for i, s in enumerate(_require(dg_doc, "services", "$.dependency_graph")):
        path = f"$.dependency_graph.services[{i}]"
        _check_keys(s, {"node", "utility"}, path)
        services[str(_require(s, "node", path))] = float(_require(s, "utility", path))
    dg = DependencyGraph(
        nodes=frozenset(str(n) for n in _require(dg_doc, "nodes", "$.dependency_graph")),
        edges=tuple(dg_edges),
        dep_fn=dep_fn,
        service_nodes=frozenset(services),
        utility=services,
    )

    eta = {}
    for i, entry in enumerate(_require(doc, "eta", "$")):
        path = f"$.eta[{i}]"
        _check_keys(entry, {"vuln", "component", "value"}, path)
        key = (str(_require(entry, "vuln", path)), str(_require(entry, "component", path)))
        if key in eta:
            raise GraphFormatError(f"{path}: duplicate eta entry for {key}")
        eta[key] = float(_require(entry, "value", path))

    return ImpactAssessmentGraph(ag=ag, dg=dg, eta=eta)


def iag_to_dict(iag: ImpactAssessmentGraph) -> dict:
    ag, dg = iag.ag, iag.dg
    return {
        "attack_graph": {
            "nodes": sorted(ag.nodes),
            "edges": [
                {"from": a, "to": b, "prob": ag.edge_prob[(a, b)]}
                for a, b in sorted(ag.edges)
            ],
            "entry_nodes": sorted(ag.entry_nodes),
            "attacker_node": ag.attacker_node,
        },
        "dependency_graph": {
            "nodes": sorted(dg.nodes),
            "edges": [{"dependent": a, "supplier": b} for a, b in sorted(dg.edges)],
            "dep_fn": {h: dg.dep_fn[h].value for h in sorted(dg.dep_fn)},
            "services": [{"node": h, "utility": dg.utility[h]} for h in sorted(dg.service_nodes)],
        },
        "eta": [
            {"vuln": v, "component": h, "value": iag.eta[(v, h)]}
            for v, h in sorted(iag.eta)
        ],
    }


def load_iag(path: str | Path) -> ImpactAssessmentGraph:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path}: invalid JSON ({exc})") from exc
    try:
        return iag_from_dict(doc)
    except GraphFormatError as exc:
        raise GraphFormatError(f"{path}: {exc}") from None


def dump_iag(iag: ImpactAssessmentGraph, path: str | Path) -> None:
    Path(path).write_text(json.dumps(iag_to_dict(iag), indent=2, sort_keys=True) + "\n")
