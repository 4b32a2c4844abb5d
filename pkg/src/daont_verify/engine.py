"""Orchestration: load schema + contract sources into named graphs, keep
immutable versioned snapshots, run checks and apply what-if edits.

Snapshots are frozen graphs; a what-if edit never mutates an existing
snapshot, it derives a new one and bumps the version, so a report computed
against version v stays valid (and byte-identical when re-rendered) no
matter what is edited afterwards. Edits per graph id are serialized by a
lock; reads need no locking.
"""

from __future__ import annotations

import threading
from typing import Iterable

from .corpus import fixture_source
from .rdf import Graph, Triple, merge
from .rules import (
    ComplianceReport,
    ComplianceRule,
    UnknownRuleError,
    builtin_rules,
    check,
    rules_by_id,
)
from .turtle import ParseError, PrefixMap, parse_turtle
from .vocab import default_prefixes, schema_graph


class UnknownGraphError(KeyError):
    """No graph is registered under the requested id."""


class Session:
    """Registry of named, versioned graph snapshots plus the rule catalogue
    in force."""

    def __init__(self, rules: list[ComplianceRule] | None = None):
        self.rules = rules if rules is not None else builtin_rules()
        self._by_id = rules_by_id(self.rules)
        self._snapshots: dict[str, list[Graph]] = {}
        self._prefixes: dict[str, PrefixMap] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    # -- graph registry -------------------------------------------------

    def graph_ids(self) -> list[str]:
        with self._registry_lock:
            return sorted(self._snapshots)

    def has_graph(self, graph_id: str) -> bool:
        with self._registry_lock:
            return graph_id in self._snapshots

    def graph(self, graph_id: str, version: int | None = None) -> Graph:
        """The snapshot at `version` (default: current). Frozen; share freely."""
        with self._registry_lock:
            history = self._snapshots.get(graph_id)
            if history is None:
                raise UnknownGraphError(graph_id)
            if version is None:
                return history[-1]
            if not 1 <= version <= len(history):
                raise UnknownGraphError(f"{graph_id}@{version}")
            return history[version - 1]

    def version(self, graph_id: str) -> int:
        with self._registry_lock:
            history = self._snapshots.get(graph_id)
            if history is None:
                raise UnknownGraphError(graph_id)
            return len(history)

    def prefixes(self, graph_id: str) -> PrefixMap:
        with self._registry_lock:
            env = self._prefixes.get(graph_id)
            if env is None:
                raise UnknownGraphError(graph_id)
            return env.copy()

    def _lock_for(self, graph_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(graph_id, threading.Lock())

    # -- loading ----------------------------------------------------------

    def load_contracts(self, sources: Iterable[str], graph_id: str) -> int:
        """Parse the Turtle sources, merge them with the schema graph and
        publish the result as the graph's next snapshot.

        A syntax error raises ParseError with source_index set to the
        offending source's position.
        """
        env = default_prefixes()
        parsed: list[Graph] = []
        for index, text in enumerate(sources):
            try:
                parsed.append(parse_turtle(text, prefixes=env))
            except ParseError as exc:
                raise ParseError(exc.diagnostic, source_index=index) from exc
        combined = merge(schema_graph(), *parsed)
        combined.label = graph_id
        combined.freeze()
        with self._registry_lock:
            history = self._snapshots.setdefault(graph_id, [])
            history.append(combined)
            self._prefixes[graph_id] = env
            return len(history)

    def load_fixtures(self, names: Iterable[str], graph_id: str) -> int:
        return self.load_contracts((fixture_source(n) for n in names), graph_id)

    # -- checking ---------------------------------------------------------

    def resolve_rules(self, rule_ids: Iterable[str] | None) -> list[ComplianceRule]:
        if rule_ids is None:
            return self.rules
        resolved = []
        for rid in rule_ids:
            rule = self._by_id.get(rid)
            if rule is None:
                raise UnknownRuleError(rid)
            resolved.append(rule)
        return resolved

    def run_check(self, graph_id: str, rule_ids: Iterable[str] | None = None,
                  infer: bool = False) -> ComplianceReport:
        rules = self.resolve_rules(rule_ids)
        with self._registry_lock:
            history = self._snapshots.get(graph_id)
            if history is None:
                raise UnknownGraphError(graph_id)
            snapshot, version = history[-1], len(history)
        return check(snapshot, rules, infer=infer, graph_id=graph_id,
                     graph_version=version)

    # -- what-if edits ------------------------------------------------------

    def apply_whatif(self, graph_id: str, add: Iterable[Triple] = (),
                     remove: Iterable[Triple] = ()) -> int:
        """Publish (current \\ remove) | add as the next snapshot."""
        with self._lock_for(graph_id):
            current = self.graph(graph_id)
            edited = current.copy()
            for t in remove:
                edited.remove(t)
            for t in add:
                edited.insert(t)
            edited.freeze()
            with self._registry_lock:
                history = self._snapshots[graph_id]
                history.append(edited)
                return len(history)

    def apply_whatif_turtle(self, graph_id: str, fragment: str,
                            mode: str = "add") -> int:
        """What-if edit from a Turtle fragment, parsed against the graph's
        prefix environment plus the fragment's own directives."""
        if mode not in ("add", "remove"):
            raise ValueError(f"mode must be 'add' or 'remove': {mode!r}")
        env = self.prefixes(graph_id)
        delta = parse_turtle(fragment, prefixes=env)
        if mode == "add":
            return self.apply_whatif(graph_id, add=delta)
        return self.apply_whatif(graph_id, remove=delta)
