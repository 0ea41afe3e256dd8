"""Cabinet shape programs: AST, two text syntaxes, and model validation.

A shape program is an ordered list of primitive instances, each carrying a
catalog model ID, an oriented box (the model-agnostic pose/size), and an
ordered map of model-specific parameters. The same model can be written in
two syntaxes:

* Python-style, two statements per primitive::

    box_0 = Box(position=(300, 200, 1000), size=(600, 400, 2000), rotation=0)
    model_0 = Model(id="M-BB01", box=box_0, N=2, NKA=298, NKB=266, DBXX=1)

* YAML (restricted subset), a ``cabinet:`` sequence of entries with fields
  ``id``, ``name`` (optional), ``position``, ``size``, ``rotation`` and
  ``params`` (optional).

Parsing never raises on malformed input; it returns diagnostics with source
spans. Emission is deterministic and round-trips exactly:
``parse(emit(model)) == model`` for both syntaxes.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from decimal import Decimal

from . import geometry, ryaml
from .catalog import ParamValue, PrimitiveCatalog, validate_params
from .diagnostics import Diagnostic, SourceSpan, error, has_errors, warning
from .geometry import OrientedBox

MAX_INSTANCES = 48
SIZE_FILTER_MM = (100.0, 4500.0)

_PARAM_KEY_RE = re.compile(r"^[A-Z][A-Z0-9]*$")


@dataclass(frozen=True)
class PrimitiveInstance:
    """One placed catalog primitive: model ID, box, model-specific params."""

    model_id: str
    box: OrientedBox
    name: str = ""
    params: dict[str, ParamValue] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.model_id:
            raise ValueError("model_id must be non-empty")
        object.__setattr__(self, "params", dict(self.params))


@dataclass(frozen=True)
class CabinetModel:
    """An ordered list of primitive instances; the unit of every pipeline."""

    instances: tuple[PrimitiveInstance, ...]

    def __post_init__(self) -> None:
        instances = tuple(self.instances)
        if not instances:
            raise ValueError("a cabinet model must contain at least one instance")
        object.__setattr__(self, "instances", instances)

    def __len__(self) -> int:
        return len(self.instances)

    def aabb(self):
        return geometry.model_aabb(self)


def make_instance(
    catalog: PrimitiveCatalog,
    model_id: str,
    box: OrientedBox,
    params: dict[str, ParamValue] | None = None,
) -> PrimitiveInstance:
    """Build an instance with its display name filled from the catalog."""
    schema = catalog.get(model_id)
    name = schema.name if schema is not None else ""
    return PrimitiveInstance(model_id=model_id, box=box, name=name, params=dict(params or {}))


@dataclass
class ParseResult:
    """Outcome of a parse: a model when no errors occurred, plus diagnostics."""

    model: CabinetModel | None
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return self.model is not None

    def unwrap(self) -> CabinetModel:
        if self.model is None:
            summary = "; ".join(str(d) for d in self.diagnostics[:3])
            raise ValueError(f"shape program has errors: {summary}")
        return self.model


# ---------------------------------------------------------------------------
# Number formatting shared by both emitters.


def format_box_number(value: float) -> str:
    """Minimal-digit rendering of a pose/size coordinate (always float-valued)."""
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return _positional(value)


def format_param_value(value: ParamValue, *, quote) -> str:
    """Type-preserving rendering: ints bare, floats with a decimal point."""
    if isinstance(value, bool):
        raise ValueError("boolean parameter values are not supported")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if value == int(value) and abs(value) < 1e15:
            return f"{value:.1f}"
        return _positional(value)
    return quote(value)


def _positional(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError("non-finite numbers cannot be emitted")
    return format(Decimal(repr(value)), "f")


def _quote_py(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _to_float(value) -> float:
    """Lossy float conversion that maps out-of-range ints to inf (not a crash)."""
    try:
        return float(value)
    except OverflowError:
        return math.inf


# ---------------------------------------------------------------------------
# Python-style syntax.

_TOKEN_NAME = "name"
_TOKEN_NUMBER = "number"
_TOKEN_STRING = "string"
_TOKEN_OP = "op"
_TOKEN_NEWLINE = "newline"
_TOKEN_EOF = "eof"

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"[+-]?(?:[0-9]+\.[0-9]*|\.[0-9]+|[0-9]+)")


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    span: SourceSpan


class _SyntaxError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(message)
        self.message = message
        self.span = span


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col, i = 1, 1, 0
    length = len(text)
    line_has_tokens = False

    def emit_newline(span: SourceSpan) -> None:
        nonlocal line_has_tokens
        if line_has_tokens:
            tokens.append(_Token(_TOKEN_NEWLINE, "\n", span))
            line_has_tokens = False

    while i < length:
        ch = text[i]
        if ch == "\n":
            emit_newline(SourceSpan(line, col, i))
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < length and text[i] != "\n":
                i += 1
                col += 1
            continue
        span = SourceSpan(line, col, i)
        if ch in "=(),":
            tokens.append(_Token(_TOKEN_OP, ch, span))
            i += 1
            col += 1
            line_has_tokens = True
            continue
        if ch == '"':
            j = i + 1
            buf: list[str] = []
            while j < length and text[j] not in ('"', "\n"):
                if text[j] == "\\" and j + 1 < length and text[j + 1] in ('"', "\\"):
                    buf.append(text[j + 1])
                    j += 2
                else:
                    buf.append(text[j])
                    j += 1
            if j >= length or text[j] != '"':
                raise _SyntaxError("unterminated string literal", span)
            tokens.append(
                _Token(_TOKEN_STRING, "".join(buf), SourceSpan(line, col, i, j + 1 - i))
            )
            col += j + 1 - i
            i = j + 1
            line_has_tokens = True
            continue
        match = _NUMBER_RE.match(text, i)
        if match and (ch.isdigit() or ch in "+-." ):
            token_text = match.group(0)
            tokens.append(
                _Token(_TOKEN_NUMBER, token_text, SourceSpan(line, col, i, len(token_text)))
            )
            i = match.end()
            col += len(token_text)
            line_has_tokens = True
            continue
        match = _NAME_RE.match(text, i)
        if match:
            token_text = match.group(0)
            tokens.append(
                _Token(_TOKEN_NAME, token_text, SourceSpan(line, col, i, len(token_text)))
            )
            i = match.end()
            col += len(token_text)
            line_has_tokens = True
            continue
        raise _SyntaxError(f"unexpected character {ch!r}", span)
    emit_newline(SourceSpan(line, col, min(i, max(0, length - 1))))
    tokens.append(_Token(_TOKEN_EOF, "", SourceSpan(line, col, length, 0)))
    return tokens


class _PyParser:
    """Recursive-descent parser for the two-statements-per-primitive grammar."""

    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        token = self.tokens[self.pos]
        if token.kind != _TOKEN_EOF:
            self.pos += 1
        return token

    def expect_op(self, op: str) -> _Token:
        token = self.peek()
        if token.kind != _TOKEN_OP or token.text != op:
            raise _SyntaxError(f"expected {op!r}", token.span)
        return self.advance()

    def expect_name(self, what: str = "identifier") -> _Token:
        token = self.peek()
        if token.kind != _TOKEN_NAME:
            raise _SyntaxError(f"expected {what}", token.span)
        return self.advance()

    def expect_newline(self) -> None:
        token = self.peek()
        if token.kind == _TOKEN_EOF:
            return
        if token.kind != _TOKEN_NEWLINE:
            raise _SyntaxError("expected end of statement", token.span)
        self.advance()

    def skip_to_newline(self) -> None:
        while self.peek().kind not in (_TOKEN_NEWLINE, _TOKEN_EOF):
            self.advance()
        if self.peek().kind == _TOKEN_NEWLINE:
            self.advance()

    def at_eof(self) -> bool:
        return self.peek().kind == _TOKEN_EOF

    def number(self, what: str) -> tuple[float | int, SourceSpan]:
        token = self.peek()
        if token.kind != _TOKEN_NUMBER:
            raise _SyntaxError(f"expected a number for {what}", token.span)
        self.advance()
        if "." in token.text:
            return float(token.text), token.span
        return int(token.text), token.span

    def vector3(self, what: str) -> tuple[tuple[float, float, float], SourceSpan]:
        open_token = self.expect_op("(")
        values: list[float] = []
        while True:
            value, _ = self.number(what)
            values.append(_to_float(value))
            token = self.peek()
            if token.kind == _TOKEN_OP and token.text == ",":
                self.advance()
                continue
            break
        close = self.expect_op(")")
        if len(values) != 3:
            raise _SyntaxError(
                f"{what} must have exactly 3 components, got {len(values)}",
                SourceSpan(
                    open_token.span.line,
                    open_token.span.column,
                    open_token.span.offset,
                    close.span.offset - open_token.span.offset + 1,
                ),
            )
        return (values[0], values[1], values[2]), open_token.span


def parse_python(text: str | bytes, catalog: PrimitiveCatalog, strict: bool = False) -> ParseResult:
    """Parse the Python-style syntax. Never raises on malformed input."""
    decoded, diags = _decode(text)
    if decoded is None:
        return ParseResult(None, diags)
    try:
        tokens = _tokenize(decoded)
    except _SyntaxError as exc:
        diags.append(error("syntax", exc.message, exc.span))
        return ParseResult(None, diags)

    parser = _PyParser(tokens)
    instances: list[PrimitiveInstance] = []
    while not parser.at_eof():
        try:
            instance = _parse_primitive(parser, catalog, strict, diags)
        except _SyntaxError as exc:
            diags.append(error("syntax", exc.message, exc.span))
            parser.skip_to_newline()
            continue
        if instance is not None:
            instances.append(instance)

    if has_errors(diags) or not instances:
        if not instances and not has_errors(diags):
            diags.append(error("empty", "program defines no primitives"))
        return ParseResult(None, diags)
    return ParseResult(CabinetModel(tuple(instances)), diags)


def _parse_primitive(
    parser: _PyParser,
    catalog: PrimitiveCatalog,
    strict: bool,
    diags: list[Diagnostic],
) -> PrimitiveInstance | None:
    # Statement 1: <var> = Box(position=(...), size=(...), rotation=r)
    box_var = parser.expect_name("box variable name")
    parser.expect_op("=")
    ctor = parser.expect_name("Box constructor")
    if ctor.text != "Box":
        raise _SyntaxError(f"expected Box constructor, got {ctor.text!r}", ctor.span)
    parser.expect_op("(")
    fields: dict[str, tuple] = {}
    first_span = ctor.span
    while True:
        key = parser.expect_name("Box argument name")
        parser.expect_op("=")
        if key.text in ("position", "size"):
            value = parser.vector3(key.text)
        elif key.text == "rotation":
            value = parser.number("rotation")
        else:
            raise _SyntaxError(f"unknown Box argument {key.text!r}", key.span)
        if key.text in fields:
            raise _SyntaxError(f"duplicate Box argument {key.text!r}", key.span)
        fields[key.text] = value
        token = parser.peek()
        if token.kind == _TOKEN_OP and token.text == ",":
            parser.advance()
            continue
        break
    parser.expect_op(")")
    parser.expect_newline()
    for required in ("position", "size", "rotation"):
        if required not in fields:
            raise _SyntaxError(f"Box is missing argument {required!r}", first_span)
    try:
        box = OrientedBox(
            position=fields["position"][0],
            size=fields["size"][0],
            rotation_deg=_to_float(fields["rotation"][0]),
        )
    except ValueError as exc:
        raise _SyntaxError(str(exc), fields["size"][1]) from None

    # Statement 2: <var> = Model(id="...", box=<box_var>, KEY=value, ...)
    if parser.at_eof():
        raise _SyntaxError(
            f"box {box_var.text!r} is not followed by a Model statement", box_var.span
        )
    parser.expect_name("model variable name")
    parser.expect_op("=")
    ctor = parser.expect_name("Model constructor")
    if ctor.text != "Model":
        raise _SyntaxError(f"expected Model constructor, got {ctor.text!r}", ctor.span)
    parser.expect_op("(")

    model_id: str | None = None
    id_span = ctor.span
    box_ref: str | None = None
    params: dict[str, ParamValue] = {}
    raw_params: dict[str, str] = {}
    while True:
        key = parser.expect_name("Model argument name")
        if key.text == "id":
            parser.expect_op("=")
            token = parser.peek()
            if token.kind != _TOKEN_STRING:
                raise _SyntaxError("model id must be a string literal", token.span)
            parser.advance()
            if model_id is not None:
                raise _SyntaxError("duplicate 'id' argument", key.span)
            model_id, id_span = token.text, token.span
        elif key.text == "box":
            parser.expect_op("=")
            ref = parser.expect_name("box variable reference")
            if box_ref is not None:
                raise _SyntaxError("duplicate 'box' argument", key.span)
            box_ref = ref.text
            if ref.text != box_var.text:
                raise _SyntaxError(
                    f"Model references box {ref.text!r} but the preceding statement "
                    f"defines {box_var.text!r}",
                    ref.span,
                )
        else:
            if not _PARAM_KEY_RE.match(key.text):
                raise _SyntaxError(
                    f"parameter key {key.text!r} must match [A-Z][A-Z0-9]*", key.span
                )
            parser.expect_op("=")
            token = parser.peek()
            if token.kind == _TOKEN_NUMBER:
                parser.advance()
                value: ParamValue = float(token.text) if "." in token.text else int(token.text)
            elif token.kind == _TOKEN_STRING:
                parser.advance()
                value = token.text
            else:
                raise _SyntaxError(
                    f"parameter {key.text} must be a number or string", token.span
                )
            if key.text in params:
                diags.append(
                    error("duplicate-param", f"duplicate parameter key {key.text!r}", key.span)
                )
            params[key.text] = value
            raw_params[key.text] = token.text
        token = parser.peek()
        if token.kind == _TOKEN_OP and token.text == ",":
            parser.advance()
            continue
        break
    parser.expect_op(")")
    parser.expect_newline()
    if model_id is None:
        raise _SyntaxError("Model is missing the 'id' argument", ctor.span)
    if box_ref is None:
        raise _SyntaxError("Model is missing the 'box' argument", ctor.span)
    return _finish_instance(model_id, id_span, box, params, raw_params, catalog, strict, diags)


def _finish_instance(
    model_id: str,
    id_span: SourceSpan | None,
    box: OrientedBox,
    params: dict[str, ParamValue],
    raw_params: dict[str, str],
    catalog: PrimitiveCatalog,
    strict: bool,
    diags: list[Diagnostic],
) -> PrimitiveInstance | None:
    schema = catalog.get(model_id)
    if schema is None:
        message = f"unknown model ID {model_id!r}"
        if strict:
            diags.append(error("unknown-model", message, id_span))
            return None
        diags.append(warning("unknown-model", message, id_span))
        # Catalog drift: keep unknown parameters as their verbatim source text.
        text_params: dict[str, ParamValue] = {
            key: raw_params.get(key, str(value)) for key, value in params.items()
        }
        return PrimitiveInstance(model_id=model_id, box=box, name="", params=text_params)

    checked = validate_params(schema, params)
    kept = dict(params)
    for diag in checked:
        if strict:
            diags.append(Diagnostic("error", diag.code, diag.message, id_span))
        else:
            diags.append(Diagnostic("warning", diag.code, diag.message, id_span))
    if not strict:
        for key in params:
            if schema.schema_for(key) is None:
                kept[key] = raw_params.get(key, str(params[key]))
    if strict and any(d.severity == "error" for d in checked):
        return None
    return PrimitiveInstance(model_id=model_id, box=box, name=schema.name, params=kept)


def emit_python(model: CabinetModel, catalog: PrimitiveCatalog) -> str:
    """Deterministic Python-style emission; two statements per primitive."""
    lines: list[str] = []
    for k, instance in enumerate(model.instances):
        px, py, pz = (format_box_number(c) for c in instance.box.position)
        sx, sy, sz = (format_box_number(c) for c in instance.box.size)
        rot = format_box_number(instance.box.rotation_deg)
        lines.append(
            f"box_{k} = Box(position=({px}, {py}, {pz}), "
            f"size=({sx}, {sy}, {sz}), rotation={rot})"
        )
        args = [f'id="{instance.model_id}"', f"box=box_{k}"]
        for key, value in instance.params.items():
            args.append(f"{key}={format_param_value(value, quote=_quote_py)}")
        lines.append(f"model_{k} = Model({', '.join(args)})")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# YAML syntax.


def parse_yaml(text: str | bytes, catalog: PrimitiveCatalog, strict: bool = False) -> ParseResult:
    """Parse the YAML syntax (restricted subset). Never raises on bad input."""
    decoded, diags = _decode(text)
    if decoded is None:
        return ParseResult(None, diags)
    try:
        root = ryaml.parse(decoded)
    except ryaml.RYamlError as exc:
        diags.append(error("syntax", exc.message, exc.span))
        return ParseResult(None, diags)

    if not isinstance(root, ryaml.MapNode) or not isinstance(
        root.get("cabinet"), ryaml.SeqNode
    ):
        diags.append(error("syntax", "document must contain a 'cabinet:' sequence", _span_of(root)))
        return ParseResult(None, diags)

    entries = root.get("cabinet")
    assert isinstance(entries, ryaml.SeqNode)
    instances: list[PrimitiveInstance] = []
    for index, entry in enumerate(entries.items):
        instance = _instance_from_yaml(index, entry, catalog, strict, diags)
        if instance is not None:
            instances.append(instance)

    if has_errors(diags) or not instances:
        if not instances and not has_errors(diags):
            diags.append(error("empty", "cabinet sequence is empty", _span_of(entries)))
        return ParseResult(None, diags)
    return ParseResult(CabinetModel(tuple(instances)), diags)


def _instance_from_yaml(
    index: int,
    entry: ryaml.Node,
    catalog: PrimitiveCatalog,
    strict: bool,
    diags: list[Diagnostic],
) -> PrimitiveInstance | None:
    if not isinstance(entry, ryaml.MapNode):
        diags.append(error("syntax", f"cabinet entry {index} must be a mapping", _span_of(entry)))
        return None
    allowed = {"id", "name", "position", "size", "rotation", "params"}
    ok = True
    for key in entry.pairs:
        if key not in allowed:
            diags.append(
                error("syntax", f"unknown field {key!r} in cabinet entry", entry.key_spans[key])
            )
            ok = False

    id_node = entry.get("id")
    if not isinstance(id_node, ryaml.ScalarNode) or not isinstance(id_node.value, str):
        diags.append(error("syntax", f"cabinet entry {index} requires a string 'id'", _span_of(entry)))
        return None

    position = _vector_from_yaml(entry, "position", diags)
    size = _vector_from_yaml(entry, "size", diags)
    rotation_node = entry.get("rotation")
    rotation = 0.0
    if rotation_node is None:
        diags.append(error("syntax", f"cabinet entry {index} requires 'rotation'", _span_of(entry)))
        ok = False
    elif not isinstance(rotation_node, ryaml.ScalarNode) or isinstance(rotation_node.value, str):
        diags.append(error("syntax", "'rotation' must be a number", _span_of(rotation_node)))
        ok = False
    else:
        rotation = _to_float(rotation_node.value)

    params: dict[str, ParamValue] = {}
    raw_params: dict[str, str] = {}
    params_node = entry.get("params")
    if params_node is not None:
        if not isinstance(params_node, ryaml.MapNode):
            diags.append(error("syntax", "'params' must be a mapping", _span_of(params_node)))
            ok = False
        else:
            for key, value_node in params_node.pairs.items():
                if not _PARAM_KEY_RE.match(key):
                    diags.append(
                        error(
                            "syntax",
                            f"parameter key {key!r} must match [A-Z][A-Z0-9]*",
                            params_node.key_spans[key],
                        )
                    )
                    ok = False
                    continue
                if not isinstance(value_node, ryaml.ScalarNode):
                    diags.append(
                        error("syntax", f"parameter {key} must be a scalar", _span_of(value_node))
                    )
                    ok = False
                    continue
                params[key] = value_node.value
                raw_params[key] = (
                    value_node.value
                    if isinstance(value_node.value, str)
                    else ryaml.format_scalar(value_node.value)
                )

    if position is None or size is None or not ok:
        return None
    try:
        box = OrientedBox(position=position, size=size, rotation_deg=rotation)
    except ValueError as exc:
        diags.append(error("syntax", str(exc), _span_of(entry)))
        return None

    instance = _finish_instance(
        id_node.value, id_node.span, box, params, raw_params, catalog, strict, diags
    )
    if instance is None:
        return None
    name_node = entry.get("name")
    if isinstance(name_node, ryaml.ScalarNode) and isinstance(name_node.value, str):
        instance = PrimitiveInstance(
            model_id=instance.model_id,
            box=instance.box,
            name=name_node.value,
            params=instance.params,
        )
    return instance


def _vector_from_yaml(
    entry: ryaml.MapNode, key: str, diags: list[Diagnostic]
) -> tuple[float, float, float] | None:
    node = entry.get(key)
    if node is None:
        diags.append(error("syntax", f"cabinet entry requires {key!r}", _span_of(entry)))
        return None
    if not isinstance(node, ryaml.SeqNode):
        diags.append(error("syntax", f"{key!r} must be a 3-sequence", _span_of(node)))
        return None
    values: list[float] = []
    for item in node.items:
        if not isinstance(item, ryaml.ScalarNode) or isinstance(item.value, str):
            diags.append(error("syntax", f"{key!r} components must be numbers", _span_of(item)))
            return None
        values.append(_to_float(item.value))
    if len(values) != 3:
        diags.append(
            error("syntax", f"{key!r} must have exactly 3 components, got {len(values)}", _span_of(node))
        )
        return None
    return values[0], values[1], values[2]


def _span_of(node) -> SourceSpan | None:
    return getattr(node, "span", None)


def emit_yaml(model: CabinetModel, catalog: PrimitiveCatalog) -> str:
    """Deterministic YAML emission with the fixed field order."""
    lines = ["cabinet:"]
    for instance in model.instances:
        lines.append(f"- id: {ryaml.format_string(instance.model_id)}")
        if instance.name:
            lines.append(f"  name: {ryaml.format_string(instance.name)}")
        lines.append("  position:")
        for component in instance.box.position:
            lines.append(f"  - {format_box_number(component)}")
        lines.append("  size:")
        for component in instance.box.size:
            lines.append(f"  - {format_box_number(component)}")
        lines.append(f"  rotation: {format_box_number(instance.box.rotation_deg)}")
        if instance.params:
            lines.append("  params:")
            for key, value in instance.params.items():
                rendered = format_param_value(value, quote=ryaml.format_string)
                lines.append(f"    {key}: {rendered}")
    return "\n".join(lines) + "\n"


def _decode(text: str | bytes) -> tuple[str | None, list[Diagnostic]]:
    if isinstance(text, str):
        return text, []
    try:
        return text.decode("utf-8"), []
    except UnicodeDecodeError as exc:
        span = SourceSpan(1, 1, exc.start, max(1, exc.end - exc.start))
        return None, [error("encoding", "input is not valid UTF-8", span)]


# ---------------------------------------------------------------------------
# Validation.


def validate(
    model: CabinetModel, catalog: PrimitiveCatalog, *, filters: bool = False
) -> list[Diagnostic]:
    """Check model invariants and, optionally, the dataset-filter rules.

    Returns all violations as diagnostics; an empty list means valid.
    """
    diags: list[Diagnostic] = []
    for index, instance in enumerate(model.instances):
        schema = catalog.get(instance.model_id)
        if schema is None:
            diags.append(
                error(
                    "unknown-model",
                    f"instance {index}: unknown model ID {instance.model_id!r}",
                )
            )
        else:
            for diag in validate_params(schema, instance.params):
                diags.append(
                    Diagnostic(diag.severity, diag.code, f"instance {index}: {diag.message}")
                )
            diags.extend(_check_width_closure(index, instance, schema, catalog))
        corners = geometry.box_corners(instance.box)
        if corners.min() < -geometry.OCTANT_EPS:
            diags.append(
                error(
                    "octant",
                    f"instance {index}: box extends outside the first octant "
                    f"(min corner coordinate {corners.min():.6f} mm)",
                )
            )

    if filters:
        if len(model.instances) > MAX_INSTANCES:
            diags.append(
                error(
                    "filter-count",
                    f"model has {len(model.instances)} primitives; the dataset "
                    f"filter allows at most {MAX_INSTANCES}",
                )
            )
        lo, hi = geometry.model_aabb(model)
        max_dim = float((hi - lo).max())
        if not SIZE_FILTER_MM[0] <= max_dim <= SIZE_FILTER_MM[1]:
            diags.append(
                error(
                    "filter-size",
                    f"model extent {max_dim:.1f} mm is outside the allowed "
                    f"range [{SIZE_FILTER_MM[0]:.0f}, {SIZE_FILTER_MM[1]:.0f}] mm",
                )
            )
    return diags


def _check_width_closure(index, instance, schema, catalog) -> list[Diagnostic]:
    """Warn when divided-space widths plus dividers exceed the box interior."""
    nk_values = [
        v for k, v in instance.params.items()
        if re.match(r"^NK[A-Z]$", k) and isinstance(v, (int, float)) and not isinstance(v, bool)
    ]
    if not nk_values or schema.schema_for("N") is None:
        return []
    n = instance.params.get("N")
    if not isinstance(n, int) or isinstance(n, bool):
        return []
    thickness = catalog.divider_thickness_mm
    interior = instance.box.size[0] - 2 * thickness
    needed = sum(nk_values) + (n - 1) * thickness
    if needed > interior + 1e-6:
        return [
            warning(
                "width-closure",
                f"instance {index}: divided-space widths ({needed:.1f} mm with "
                f"dividers) exceed the interior width ({interior:.1f} mm)",
            )
        ]
    return []
