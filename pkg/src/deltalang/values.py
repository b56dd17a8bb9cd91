"""Hereditarily finite values and the list operations of semantic programming.

A value is either an atom (``int``, ``bool`` or ``str``) or a :class:`ListVal`.
Lists use the "last element is the head" convention: ``head`` returns the
final element and ``tail`` drops it, ``cons`` appends one new last element.

Equality is strict and structural: ``True`` and ``1`` are different values
even though Python considers them equal, so always compare with
:func:`values_equal` (``ListVal.__eq__`` already does).

Every operation accepts an optional ``meter`` and charges one step per
element copied or compared.
"""
from __future__ import annotations

from typing import Iterable, Union

from .errors import ArgumentError, DeltaTypeError, ValueSyntaxError

Atom = Union[int, bool, str]


class ListVal:
    """Immutable finite sequence of values."""

    __slots__ = ("items", "_size", "_hash")

    def __init__(self, items: Iterable = ()):
        self.items = tuple(items)
        self._size = None
        self._hash = None

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __eq__(self, other):
        if not isinstance(other, ListVal):
            return NotImplemented
        return values_equal(self, other)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("list",) + tuple(_hash_key(v) for v in self.items))
        return self._hash

    def __repr__(self):
        return dump(self)


Value = Union[Atom, ListVal]

NIL = ListVal()


def _hash_key(v):
    if isinstance(v, ListVal):
        return hash(v)
    return (type(v).__name__, v)


def lst(*items) -> ListVal:
    return ListVal(items)


def from_python(obj) -> Value:
    """Convert nested Python lists/tuples of atoms into a value."""
    if isinstance(obj, ListVal):
        return obj
    if isinstance(obj, (list, tuple)):
        return ListVal(from_python(x) for x in obj)
    if isinstance(obj, (bool, int, str)):
        return obj
    raise DeltaTypeError(f"cannot convert {type(obj).__name__} to a value")


def to_python(v: Value):
    if isinstance(v, ListVal):
        return [to_python(x) for x in v.items]
    return v


def is_value(v) -> bool:
    if isinstance(v, ListVal):
        return True
    return isinstance(v, (bool, int, str))


def is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def is_nat(v) -> bool:
    return is_int(v) and v >= 0


def type_name(v) -> str:
    if isinstance(v, ListVal):
        return "list"
    if isinstance(v, bool):
        return "bool"
    if isinstance(v, int):
        return "int"
    if isinstance(v, str):
        return "text"
    return type(v).__name__


def values_equal(a, b) -> bool:
    if isinstance(a, ListVal):
        if not isinstance(b, ListVal) or len(a.items) != len(b.items):
            return False
        if a is b:
            return True
        return all(values_equal(x, y) for x, y in zip(a.items, b.items))
    if isinstance(b, ListVal):
        return False
    return type(a) is type(b) and a == b


def _eq_cost(a, b) -> tuple[bool, int]:
    """Structural equality plus the number of nodes visited."""
    if isinstance(a, ListVal) and isinstance(b, ListVal):
        if len(a.items) != len(b.items):
            return False, 1
        cost = 1
        for x, y in zip(a.items, b.items):
            eq, c = _eq_cost(x, y)
            cost += c
            if not eq:
                return False, cost
        return True, cost
    return values_equal(a, b), 1


def size(v) -> int:
    """Structural size |v|: 1 + bit length for integers, 1 + length for text, 1 for booleans,
    1 + sum of element sizes for lists."""
    if isinstance(v, ListVal):
        if v._size is None:
            v._size = 1 + sum(size(x) for x in v.items)
        return v._size
    if isinstance(v, bool):
        return 1
    if isinstance(v, int):
        return 1 + v.bit_length()
    if isinstance(v, str):
        return 1 + len(v)
    raise DeltaTypeError(f"not a value: {v!r}")


def _need_list(v, op: str) -> ListVal:
    if not isinstance(v, ListVal):
        raise DeltaTypeError(f"{op}: expected a list, got {type_name(v)}")
    return v


def _charge(meter, n: int) -> None:
    if meter is not None:
        meter.charge(n)


# -- the nine list operations ------------------------------------------------


def nil() -> ListVal:
    return NIL


def head(l, meter=None):
    l = _need_list(l, "head")
    _charge(meter, 1)
    return l.items[-1] if l.items else NIL


def tail(l, meter=None) -> ListVal:
    l = _need_list(l, "tail")
    _charge(meter, 1 + len(l.items))
    return ListVal(l.items[:-1]) if l.items else NIL


def cons(l1, l2, meter=None) -> ListVal:
    l1 = _need_list(l1, "cons")
    _charge(meter, 1 + len(l1.items))
    return ListVal(l1.items + (l2,))


def conc(l1, l2, meter=None) -> ListVal:
    l1 = _need_list(l1, "conc")
    l2 = _need_list(l2, "conc")
    _charge(meter, 1 + len(l1.items) + len(l2.items))
    return ListVal(l1.items + l2.items)


def member(x, w, meter=None) -> bool:
    w = _need_list(w, "member")
    cost = 1
    found = False
    for e in w.items:
        eq, c = _eq_cost(x, e)
        cost += c
        if eq:
            found = True
            break
    _charge(meter, cost)
    return found


def prefix(l, w, meter=None) -> bool:
    l = _need_list(l, "prefix")
    w = _need_list(w, "prefix")
    cost = 1
    result = len(l.items) <= len(w.items)
    if result:
        for x, y in zip(l.items, w.items):
            eq, c = _eq_cost(x, y)
            cost += c
            if not eq:
                result = False
                break
    _charge(meter, cost)
    return result


def _need_pair(p, op: str) -> ListVal:
    if not isinstance(p, ListVal) or len(p.items) != 2:
        raise DeltaTypeError(f"{op}: expected a <key,value> pair, got {dump(p) if is_value(p) else p!r}")
    return p


def add_value(l, p, meter=None) -> ListVal:
    """Drop every pair keyed like ``p`` from ``l`` (survivors keep their order), append ``p`` last."""
    l = _need_list(l, "addValue")
    p = _need_pair(p, "addValue")
    key = p.items[0]
    kept = []
    cost = 1
    for e in l.items:
        e = _need_pair(e, "addValue")
        eq, c = _eq_cost(e.items[0], key)
        cost += c
        if not eq:
            kept.append(e)
    kept.append(p)
    _charge(meter, cost)
    return ListVal(kept)


def add_values(l, ps, meter=None) -> ListVal:
    ps = list(ps.items) if isinstance(ps, ListVal) else list(ps)
    keys = []
    for p in ps:
        p = _need_pair(p, "addValues")
        k = p.items[0]
        if any(values_equal(k, seen) for seen in keys):
            raise ArgumentError(f"addValues: duplicate key {dump(k)}")
        keys.append(k)
    l = _need_list(l, "addValues")
    for p in ps:
        l = add_value(l, p, meter)
    return l


# -- frames ------------------------------------------------------------------


def binding(name: str, value) -> ListVal:
    return ListVal((name, value))


_MISSING = object()


def lookup(frame: ListVal, name, default=_MISSING):
    """Value bound to ``name``, scanning pairs from the last one backward."""
    for pair in reversed(frame.items):
        if values_equal(pair.items[0], name):
            return pair.items[1]
    if default is _MISSING:
        raise KeyError(name)
    return default


def frame_from(bindings) -> ListVal:
    """Frame built by successive addValue calls (later duplicates win)."""
    items = bindings.items() if isinstance(bindings, dict) else bindings
    frame = NIL
    for name, value in items:
        frame = add_value(frame, binding(name, value))
    return frame


# -- canonical text ------------------------------------------------------------

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t", "r": "\r"}


def _quote(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def dump(v) -> str:
    if isinstance(v, ListVal):
        return "<" + ",".join(dump(x) for x in v.items) + ">"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return _quote(v)
    raise DeltaTypeError(f"not a value: {v!r}")


class _ValueReader:
    def __init__(self, text: str, pos: int = 0):
        self.text = text
        self.pos = pos

    def error(self, msg: str):
        raise ValueSyntaxError(f"{msg} at offset {self.pos}")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r\n":
            self.pos += 1

    def read(self):
        self.skip_ws()
        t, i = self.text, self.pos
        if i >= len(t):
            self.error("unexpected end of value")
        ch = t[i]
        if ch == "<":
            self.pos += 1
            items = []
            self.skip_ws()
            if self.pos < len(t) and t[self.pos] == ">":
                self.pos += 1
                return NIL
            while True:
                items.append(self.read())
                self.skip_ws()
                if self.pos >= len(t):
                    self.error("unterminated list")
                if t[self.pos] == ",":
                    self.pos += 1
                elif t[self.pos] == ">":
                    self.pos += 1
                    return ListVal(items)
                else:
                    self.error(f"expected ',' or '>' but found {t[self.pos]!r}")
        if ch == '"':
            return self.read_text()
        if ch == "-" or ch.isdigit():
            j = i + 1 if ch == "-" else i
            k = j
            while k < len(t) and t[k].isdigit():
                k += 1
            if k == j:
                self.error("malformed integer")
            self.pos = k
            return int(t[i:k])
        for word, val in (("true", True), ("false", False)):
            if t.startswith(word, i):
                self.pos = i + len(word)
                return val
        self.error(f"unexpected character {ch!r}")

    def read_text(self) -> str:
        t = self.text
        self.pos += 1
        out = []
        while True:
            if self.pos >= len(t):
                self.error("unterminated text literal")
            ch = t[self.pos]
            if ch == '"':
                self.pos += 1
                return "".join(out)
            if ch == "\\":
                if self.pos + 1 >= len(t):
                    self.error("dangling escape")
                esc = t[self.pos + 1]
                if esc in _UNESCAPES:
                    out.append(_UNESCAPES[esc])
                    self.pos += 2
                elif esc == "u":
                    digits = t[self.pos + 2:self.pos + 6]
                    if len(digits) != 4 or any(c not in "0123456789abcdefABCDEF" for c in digits):
                        self.error("malformed \\u escape")
                    out.append(chr(int(digits, 16)))
                    self.pos += 6
                else:
                    self.error(f"unknown escape \\{esc}")
            else:
                out.append(ch)
                self.pos += 1


def parse_value(text: str):
    r = _ValueReader(text)
    v = r.read()
    r.skip_ws()
    if r.pos != len(text):
        r.error("trailing characters after value")
    return v


def read_value_prefix(text: str, pos: int):
    """Read one value starting at ``pos``; return (value, end offset)."""
    r = _ValueReader(text, pos)
    v = r.read()
    return v, r.pos
