# -*- coding: utf-8 -*-
"""
Events, event types and the matching relation between them.

An event is a record of key/value pairs. An event type (a pattern body) is a
list of key/field-pattern constraints; an event matches it when the
constraints are a deep subset of the event's entries, unifying variables
along the way.
"""
import json
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from decimal import Decimal

from protomon.rmlexc import InvalidEvent

ATOM_TYPES = (str, int, float, bool)
RE_IDENTIFIER = re.compile(r'^[A-Za-z][A-Za-z0-9_]*$')
RESERVED_WORDS = frozenset(['matches', 'let', 'true', 'false'])


def is_atom(value):
    return isinstance(value, ATOM_TYPES)


def atom_key(value):
    # bool is an int subclass, keep True and 1 apart
    return (type(value) is bool, value)


def atoms_equal(first, second):
    return atom_key(first) == atom_key(second)


def format_number(value):
    text = repr(value)
    if isinstance(value, float) and 'e' in text:
        # positional notation, the exponent form does not read back
        text = format(Decimal(text), 'f')
        if '.' not in text:
            text += '.0'
    return text


def format_atom(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, str):
        return "'%s'" % (value.replace('\\', '\\\\').replace("'", "\\'")
                         .replace('\n', '\\\n'))
    return format_number(value)


def format_key(key):
    if RE_IDENTIFIER.match(key) and key not in RESERVED_WORDS:
        return key
    return format_atom(key)


def freeze_value(value, path='event'):
    """
    freeze_value(value) -> Value

    Check `value` against the Value grammar (atom, list of atoms, record) and
    return a copy using tuples for lists.
    raise InvalidEvent
    """
    if is_atom(value):
        return value
    if isinstance(value, (list, tuple)):
        for index, item in enumerate(value):
            if not is_atom(item):
                raise InvalidEvent('%s[%d] must be a string, number or '
                                   'boolean' % (path, index))
        return tuple(value)
    if isinstance(value, Mapping):
        record = {}
        for key, item in value.items():
            if not isinstance(key, str) or not key:
                raise InvalidEvent('%s has an empty or non-string key' % path)
            record[key] = freeze_value(item, '%s.%s' % (path, key))
        return record
    raise InvalidEvent('%s has unsupported value %r' % (path, value))


def thaw_value(value):
    if isinstance(value, tuple):
        return list(value)
    if isinstance(value, Mapping):
        return dict((k, thaw_value(v)) for k, v in value.items())
    return value


class Binding(Mapping):
    """
    Binding(items)

    Immutable map from variable names to atoms. Extending a binding returns a
    new one; once bound a variable is only ever compared.
    """
    __slots__ = ('_items', '_hash')

    def __init__(self, items=()):
        self._items = dict(items)
        self._hash = None

    def __getitem__(self, name):
        return self._items[name]

    def __iter__(self):
        return iter(sorted(self._items))

    def __len__(self):
        return len(self._items)

    def _cmpkey(self):
        return frozenset((name, atom_key(value))
                         for name, value in self._items.items())

    def __eq__(self, other):
        if not isinstance(other, Binding):
            return NotImplemented
        return self._cmpkey() == other._cmpkey()

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._cmpkey())
        return self._hash

    def __repr__(self):
        return 'Binding({%s})' % ', '.join(
            '%s: %s' % (name, format_atom(self[name])) for name in self)

    def bind(self, name, value):
        items = dict(self._items)
        items[name] = value
        return Binding(items)

    def without(self, names):
        return Binding((k, v) for k, v in self._items.items()
                       if k not in names)

    def only(self, names):
        return Binding((k, v) for k, v in self._items.items() if k in names)

    def restore(self, names, saved):
        """
        restore(names, saved) -> Binding

        Forget `names`, then bind them again from the `saved` mapping.
        """
        items = dict((k, v) for k, v in self._items.items()
                     if k not in names)
        items.update(saved)
        return Binding(items)

    def merge(self, other):
        """
        merge(other) -> Binding or None when both bind a name differently
        """
        items = dict(self._items)
        for name, value in other._items.items():
            if name in items:
                if not atoms_equal(items[name], value):
                    return None
            else:
                items[name] = value
        return Binding(items)


EMPTY_BINDING = Binding()


class FieldPattern(object):

    def substitute(self, mapping):
        return self

    def variables(self):
        return iter(())


@dataclass(frozen=True, eq=False)
class Literal(FieldPattern):
    value: object

    def __eq__(self, other):
        if not isinstance(other, Literal):
            return NotImplemented
        return atoms_equal(self.value, other.value)

    def __hash__(self):
        return hash(atom_key(self.value))

    def __str__(self):
        return format_atom(self.value)


@dataclass(frozen=True)
class Wildcard(FieldPattern):

    def __str__(self):
        return '_'


WILDCARD = Wildcard()


@dataclass(frozen=True)
class Var(FieldPattern):
    name: str

    def substitute(self, mapping):
        return mapping.get(self.name, self)

    def variables(self):
        yield self.name

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Nested(FieldPattern):
    body: 'PatternBody'

    def substitute(self, mapping):
        return Nested(self.body.substitute(mapping))

    def variables(self):
        return self.body.variables()

    def __str__(self):
        return str(self.body)


@dataclass(frozen=True)
class PatternBody(object):
    """
    PatternBody(constraints)

    constraints -> tuple of (key, FieldPattern) pairs. Keys may repeat: the
    i-th constraint on a key applies to the i-th element of the list stored
    under that key in the event.
    """
    constraints: tuple = ()

    def substitute(self, mapping):
        if not mapping:
            return self
        return PatternBody(tuple((key, pattern.substitute(mapping))
                                 for key, pattern in self.constraints))

    def variables(self):
        for _, pattern in self.constraints:
            for name in pattern.variables():
                yield name

    def __str__(self):
        return '{%s}' % ', '.join('%s:%s' % (format_key(key), pattern)
                                  for key, pattern in self.constraints)


@dataclass(frozen=True)
class PatternDecl(object):
    """
    PatternDecl(name, params, alternatives)

    A named, optionally parametric event type. `alternatives` are the bodies
    separated by `|` in the `matches` clause.
    """
    name: str
    params: tuple
    alternatives: tuple
    location: tuple = field(default=(1, 1), compare=False, hash=False)

    @property
    def arity(self):
        return len(self.params)

    def free_variables(self):
        """
        Variables of the bodies which are not parameters; they must be bound
        by a `let` enclosing every use of the declaration.
        """
        names = []
        for body in self.alternatives:
            for name in body.variables():
                if name not in self.params and name not in names:
                    names.append(name)
        return names

    def __str__(self):
        header = self.name
        if self.params:
            header += '(%s)' % ', '.join(self.params)
        return '%s matches %s;' % (
            header, ' | '.join(str(body) for body in self.alternatives))


class Event(object):
    """
    Event(entries)

    An observed inter-agent message. `entries` is a record holding at least
    non-empty string `performative`, `sender` and `receiver`, and optionally
    a `content` record.
    raise InvalidEvent
    """
    REQUIRED_KEYS = ('performative', 'sender', 'receiver')

    def __init__(self, entries):
        if not isinstance(entries, Mapping):
            raise InvalidEvent('an event must be a JSON object')
        for key in self.REQUIRED_KEYS:
            value = entries.get(key)
            if not isinstance(value, str) or not value:
                raise InvalidEvent('missing or empty %r' % key)
        if 'content' in entries and not isinstance(entries['content'],
                                                   Mapping):
            raise InvalidEvent("'content' must be a JSON object")
        try:
            self.entries = freeze_value(entries)
            self._canonical = json.dumps(thaw_value(self.entries),
                                         sort_keys=True)
        except RecursionError:
            raise InvalidEvent('event is nested too deeply')

    @classmethod
    def from_json(cls, source):
        try:
            entries = json.loads(source)
        except ValueError as error:
            raise InvalidEvent('not valid JSON: %s' % error)
        except RecursionError:
            raise InvalidEvent('not valid JSON: nested too deeply')
        return cls(entries)

    @property
    def performative(self):
        return self.entries['performative']

    @property
    def sender(self):
        return self.entries['sender']

    @property
    def receiver(self):
        return self.entries['receiver']

    @property
    def content(self):
        return self.entries.get('content')

    def to_dict(self):
        return thaw_value(self.entries)

    def to_json(self):
        return json.dumps(self.to_dict(), separators=(',', ':'))

    def __eq__(self, other):
        if not isinstance(other, Event):
            return NotImplemented
        return self._canonical == other._canonical

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash(self._canonical)

    def __repr__(self):
        return 'Event(%s)' % self.to_json()


def _match_field(pattern, value, binding):
    if isinstance(pattern, Wildcard):
        return binding
    if isinstance(pattern, Nested):
        return _match_record(pattern.body, value, binding)
    if not is_atom(value):
        return None
    if isinstance(pattern, Literal):
        return binding if atoms_equal(pattern.value, value) else None
    if pattern.name in binding:
        return binding if atoms_equal(binding[pattern.name], value) else None
    return binding.bind(pattern.name, value)


def _match_record(body, record, binding):
    if not isinstance(record, Mapping):
        return None
    positions = {}
    for key, pattern in body.constraints:
        if key not in record:
            return None
        value = record[key]
        position = positions.get(key, 0)
        positions[key] = position + 1
        if isinstance(value, tuple):
            if position >= len(value):
                if isinstance(pattern, Wildcard) and position == 0:
                    continue
                return None
            value = value[position]
        elif position > 0:
            return None
        binding = _match_field(pattern, value, binding)
        if binding is None:
            return None
    return binding


def match_body(body, record, binding=EMPTY_BINDING):
    """
    match_body(body, record[, binding]) -> set of Binding

    Every returned binding extends `binding`. An empty set means no match.
    """
    if isinstance(record, Event):
        record = record.entries
    result = _match_record(body, record, binding)
    return set() if result is None else set([result])


def match_decl(decl, args, event, binding=EMPTY_BINDING):
    """
    match_decl(decl, args, event[, binding]) -> set of Binding

    Substitute `args` for the parameters of `decl` and match every
    alternative, returning the union of the results.
    """
    if len(args) != decl.arity:
        raise ValueError('%s expects %d arguments, got %d'
                         % (decl.name, decl.arity, len(args)))
    mapping = dict(zip(decl.params, args))
    results = set()
    for body in decl.alternatives:
        results |= match_body(body.substitute(mapping), event, binding)
    return results


def is_relevant(decls, event):
    """
    True iff `event` matches at least one declared event type, parameters
    standing for wildcards and free variables being fresh.
    """
    for decl in decls:
        if match_decl(decl, (WILDCARD,) * decl.arity, event):
            return True
    return False
