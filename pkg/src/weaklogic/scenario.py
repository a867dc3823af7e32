"""Pre/postselected scenarios: validation, JSON loading, built-in catalog.

A scenario bundles a preselected state, a postselected state, an optional
unitary applied between the intermediate measurement and the postselection,
and a table of named channel projectors that expressions can reference.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import ScenarioError
from .linalg import (
    STRUCT_TOL,
    State,
    apply,
    as_operator,
    basis_projector,
    identity,
    inner,
    is_projector,
)

CATALOG_NAMES = ("pigeonhole2", "pigeonhole3", "three-box", "hardy")

_CHANNEL_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True, eq=False)
class Scenario:
    """Validated, immutable pre/postselected setup.

    ``post_overlap`` is the postselection amplitude <post|U|pre>, recorded
    once at validation time. ``evolution`` of ``None`` means identity.
    """

    name: str
    dim: int
    labels: tuple[str, ...]
    pre_state: State
    post_state: State
    evolution: np.ndarray | None
    channels: Mapping[str, np.ndarray]
    post_overlap: complex

    def channel(self, name: str) -> np.ndarray:
        try:
            return self.channels[name]
        except KeyError:
            known = ", ".join(sorted(self.channels))
            raise ScenarioError(
                f"scenario {self.name!r} has no channel {name!r} (channels: {known})"
            ) from None


def effective_bra(s: Scenario) -> State:
    """State against which intermediate-time matrix elements are taken.

    Returns the postselected state pulled back through the evolution,
    i.e. U^dagger |post>; with identity evolution this is |post| itself.
    """
    if s.evolution is None:
        return s.post_state
    return State(s.evolution.conj().T @ s.post_state.amps, s.labels, normalized=True)


def build_scenario(
    name: str,
    labels,
    pre,
    post,
    evolution=None,
    channels: Mapping[str, np.ndarray] | None = None,
) -> Scenario:
    """Validate raw scenario data and assemble a Scenario.

    Raw pre/post amplitudes may be unnormalized; they are normalized here.
    Raises ScenarioError on any violated invariant.
    """
    labels = tuple(str(lab) for lab in labels)
    dim = len(labels)
    if dim == 0:
        raise ScenarioError("scenario needs at least one basis label")
    if len(set(labels)) != dim:
        raise ScenarioError("basis labels must be unique")

    def _state(raw, which: str) -> State:
        amps = np.asarray(raw, dtype=complex)
        if amps.shape != (dim,):
            raise ScenarioError(
                f"{which} state must have {dim} amplitudes, got shape {amps.shape}"
            )
        st = State(amps, labels)
        if st.norm < 1e-12:
            raise ScenarioError(f"{which} state has zero norm")
        return st.normalize()

    pre_state = _state(pre, "pre")
    post_state = _state(post, "post")

    ev = None
    if evolution is not None:
        ev = as_operator(evolution, "evolution")
        if ev.shape != (dim, dim):
            raise ScenarioError(
                f"evolution must be {dim}x{dim}, got {ev.shape[0]}x{ev.shape[1]}"
            )
        if np.max(np.abs(ev.conj().T @ ev - identity(dim))) > STRUCT_TOL:
            raise ScenarioError("evolution is not unitary")
        ev.setflags(write=False)

    table: dict[str, np.ndarray] = {}
    for ch_name, entries in (channels or {}).items():
        if not _CHANNEL_NAME_RE.match(ch_name):
            raise ScenarioError(f"channel name {ch_name!r} is not a valid identifier")
        p = as_operator(entries, f"channel {ch_name!r}")
        if p.shape != (dim, dim):
            raise ScenarioError(f"channel {ch_name!r} must be {dim}x{dim}")
        if not is_projector(p, STRUCT_TOL):
            raise ScenarioError(f"channel {ch_name!r} is not a projector")
        p.setflags(write=False)
        table[ch_name] = p

    evolved = apply(ev, pre_state) if ev is not None else pre_state
    overlap = inner(post_state, evolved)

    return Scenario(
        name=str(name),
        dim=dim,
        labels=labels,
        pre_state=pre_state,
        post_state=post_state,
        evolution=ev,
        channels=MappingProxyType(table),
        post_overlap=overlap,
    )


def _complex_entry(obj, what: str) -> complex:
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in obj)
    ):
        raise ScenarioError(f"{what} must be a [re, im] pair, got {obj!r}")
    return complex(obj[0], obj[1])


def _complex_vector(obj, dim: int, what: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != dim:
        raise ScenarioError(f"{what} must be a list of {dim} [re, im] pairs")
    return np.array([_complex_entry(x, what) for x in obj], dtype=complex)


def _complex_matrix(obj, dim: int, what: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != dim:
        raise ScenarioError(f"{what} must be a {dim}x{dim} array of [re, im] pairs")
    return np.array([_complex_vector(row, dim, what) for row in obj], dtype=complex)


def _reject_duplicate_keys(pairs):
    seen = set()
    for key, _ in pairs:
        if key in seen:
            raise ScenarioError(f"duplicate key {key!r} in scenario file")
        seen.add(key)
    return dict(pairs)


def load_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document.

    The document is UTF-8 JSON with fields:

    - ``name``: string
    - ``dim``: positive integer
    - ``labels``: list of ``dim`` unique basis-label strings
    - ``pre``, ``post``: lists of ``dim`` amplitudes, each a ``[re, im]``
      pair; they may be unnormalized and are normalized on load
    - ``evolution``: optional ``dim x dim`` array of ``[re, im]`` pairs
      (omitted means identity); must be unitary
    - ``channels``: object mapping channel names to either
      ``{"basis": [label, ...]}`` (projector onto the span of the listed
      basis states) or ``{"matrix": <dim x dim [re, im] array>}``

    Raises ScenarioError on malformed input or violated invariants.
    """
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")

    for field in ("name", "dim", "labels", "pre", "post", "channels"):
        if field not in doc:
            raise ScenarioError(f"scenario file is missing {field!r}")
    known = {"name", "dim", "labels", "pre", "post", "evolution", "channels"}
    for field in doc:
        if field not in known:
            raise ScenarioError(f"unknown scenario field {field!r}")

    name = doc["name"]
    if not isinstance(name, str) or not name:
        raise ScenarioError("'name' must be a non-empty string")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ScenarioError("'dim' must be a positive integer")
    labels = doc["labels"]
    if (
        not isinstance(labels, list)
        or len(labels) != dim
        or not all(isinstance(lab, str) for lab in labels)
    ):
        raise ScenarioError(f"'labels' must be a list of {dim} strings")

    pre = _complex_vector(doc["pre"], dim, "'pre'")
    post = _complex_vector(doc["post"], dim, "'post'")
    evolution = None
    if "evolution" in doc and doc["evolution"] is not None:
        evolution = _complex_matrix(doc["evolution"], dim, "'evolution'")

    if not isinstance(doc["channels"], dict):
        raise ScenarioError("'channels' must be an object")
    channels = {}
    for ch_name, spec in doc["channels"].items():
        if not isinstance(spec, dict) or set(spec) not in ({"basis"}, {"matrix"}):
            raise ScenarioError(
                f"channel {ch_name!r} must be {{'basis': [...]}} or {{'matrix': [...]}}"
            )
        if "basis" in spec:
            members = spec["basis"]
            if not isinstance(members, list) or not all(
                isinstance(m, str) for m in members
            ):
                raise ScenarioError(f"channel {ch_name!r}: 'basis' must list labels")
            try:
                channels[ch_name] = basis_projector(labels, members)
            except ValueError as exc:
                raise ScenarioError(f"channel {ch_name!r}: {exc}") from None
        else:
            channels[ch_name] = _complex_matrix(
                spec["matrix"], dim, f"channel {ch_name!r}"
            )

    return build_scenario(name, labels, pre, post, evolution, channels)


def scenario_document(s: Scenario) -> dict:
    """Scenario as a JSON-ready document in the ``load_scenario`` format."""

    def _pairs(vec):
        return [[float(z.real), float(z.imag)] for z in vec]

    doc = {
        "name": s.name,
        "dim": s.dim,
        "labels": list(s.labels),
        "pre": _pairs(s.pre_state.amps),
        "post": _pairs(s.post_state.amps),
    }
    if s.evolution is not None:
        doc["evolution"] = [_pairs(row) for row in s.evolution]
    doc["channels"] = {
        name: {"matrix": [_pairs(row) for row in p]} for name, p in s.channels.items()
    }
    return doc


def hardy_beamsplitter() -> np.ndarray:
    """Single-particle 50-50 beamsplitter used by the hardy catalog entry.

    Matrix rows index the outgoing detector basis (bright, dark), columns the
    incoming arm basis (non-interacting, interacting). The overall sign is
    pinned by requiring all printed forms of the hardy preselected state to
    coincide; the catalog's two-particle evolution is this matrix tensored
    with itself.
    """
    return -np.array([[1j, 1.0], [1.0, 1j]], dtype=complex) / np.sqrt(2.0)


def _data_text(kind: str, name: str) -> str:
    res = resources.files("weaklogic").joinpath(f"data/{kind}/{name}.json")
    try:
        return res.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ScenarioError(
            f"unknown scenario {name!r} (catalog: {', '.join(CATALOG_NAMES)})"
        ) from None


def catalog(name: str) -> Scenario:
    """Load one of the built-in scenarios by name."""
    if name not in CATALOG_NAMES:
        raise ScenarioError(
            f"unknown scenario {name!r} (catalog: {', '.join(CATALOG_NAMES)})"
        )
    return load_scenario(_data_text("scenarios", name))


def parse_audit_pairs(text: str) -> tuple[tuple[str, str, str], ...]:
    """Parse an audit-pair document: a JSON list of {a, b, kind} objects."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, list):
        raise ScenarioError("audit-pair document must be a JSON list")
    pairs = []
    for i, item in enumerate(doc):
        if not isinstance(item, dict) or set(item) != {"a", "b", "kind"}:
            raise ScenarioError(
                f"audit pair #{i} must be an object with keys 'a', 'b', 'kind'"
            )
        if not all(isinstance(item[k], str) for k in ("a", "b", "kind")):
            raise ScenarioError(f"audit pair #{i} fields must be strings")
        pairs.append((item["a"], item["b"], item["kind"]))
    return tuple(pairs)


def default_audit_pairs(name: str) -> tuple[tuple[str, str, str], ...]:
    """Built-in audit pairs shipped alongside each catalog scenario."""
    if name not in CATALOG_NAMES:
        raise ScenarioError(
            f"unknown scenario {name!r} (catalog: {', '.join(CATALOG_NAMES)})"
        )
    return parse_audit_pairs(_data_text("audits", name))
