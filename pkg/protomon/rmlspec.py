# -*- coding: utf-8 -*-
import codecs
from dataclasses import dataclass, field

from protomon.rmlexc import InvalidSpec
from protomon.rmlterm import (EqRef, PatternRef, Seq, Shuffle, And, Or, Let,
                              Star, Epsilon, Scope, format_term)
from protomon.textio import read_text


@dataclass(frozen=True)
class Equation(object):
    name: str
    body: object
    location: tuple = field(default=(1, 1), compare=False, hash=False)

    def __str__(self):
        return '%s = %s;' % (self.name, format_term(self.body))


def nullable_term(term, nullable_refs):
    """
    nullable_term(term, nullable_refs) -> bool

    Whether the empty trace belongs to `term`, reading the nullability of
    equation references from the `nullable_refs` mapping (unknown names are
    not nullable).
    """
    if isinstance(term, (Epsilon, Star)):
        return True
    if isinstance(term, PatternRef):
        return False
    if isinstance(term, EqRef):
        return nullable_refs.get(term.name, False)
    if isinstance(term, Or):
        return (nullable_term(term.left, nullable_refs)
                or nullable_term(term.right, nullable_refs))
    if isinstance(term, (Seq, Shuffle, And)):
        return (nullable_term(term.left, nullable_refs)
                and nullable_term(term.right, nullable_refs))
    if isinstance(term, (Let, Scope)):
        return nullable_term(term.body, nullable_refs)
    raise TypeError('not a term: %r' % (term,))


class Spec(object):
    """
    Protocol specification: the event types and the equations of a property.

    Spec(decls, equations, path, encoding)

    decls -> list of PatternDecl.
    equations -> list of Equation, `Main` being the entry point.
    path -> str: where the specification will be saved. To read an existing
        file see Spec.open.
    encoding -> str: encoding used at save. Default to utf-8.
    """
    ENTRY = 'Main'
    DEFAULT_ENCODING = 'utf_8'

    def __init__(self, decls=None, equations=None, path=None,
                 encoding=DEFAULT_ENCODING):
        self.decls = list(decls or [])
        self.equation_list = list(equations or [])
        self.path = path
        self.encoding = encoding
        self.decl_map = {}
        for decl in self.decls:
            self.decl_map.setdefault(decl.name, decl)
        self.equations = {}
        for equation in self.equation_list:
            self.equations.setdefault(equation.name, equation.body)
        self._nullable_refs = None

    @property
    def entry(self):
        return self.equations.get(self.ENTRY)

    def decl(self, name):
        return self.decl_map[name]

    def definition(self, name):
        return self.equations[name]

    @property
    def nullable_refs(self):
        """
        Nullability of every equation, as the least fixpoint of the equation
        system. Always terminates, even on unguarded specifications.
        """
        if self._nullable_refs is None:
            nullable = dict((name, False) for name in self.equations)
            changed = True
            while changed:
                changed = False
                for name, body in self.equations.items():
                    if not nullable[name] and nullable_term(body, nullable):
                        nullable[name] = True
                        changed = True
            self._nullable_refs = nullable
        return self._nullable_refs

    def nullable(self, term):
        return nullable_term(term, self.nullable_refs)

    def validate(self):
        from protomon.rmlparser import validate_spec
        return validate_spec(self)

    @classmethod
    def from_string(cls, source, validate=True, **kwargs):
        """
        from_string(source[, validate], **kwargs) -> Spec

        raise ParseError, InvalidSpec
        """
        from protomon.rmlparser import parse_spec
        parsed = parse_spec(source)
        new_spec = cls(parsed.decls, parsed.equation_list, **kwargs)
        if validate:
            errors = new_spec.validate()
            if errors:
                raise InvalidSpec(errors)
        return new_spec

    @classmethod
    def open(cls, path, encoding=None, validate=True):
        """
        open(path[, encoding][, validate]) -> Spec

        Encoding is detected from a byte order mark or the content when not
        given.
        """
        text, encoding = read_text(path, encoding)
        return cls.from_string(text, validate=validate, path=path,
                               encoding=encoding)

    def save(self, path=None, encoding=None):
        path = path or self.path
        encoding = encoding or self.encoding
        with codecs.open(path, 'w', encoding=encoding) as save_file:
            self.write_into(save_file)

    def write_into(self, output_file):
        """
        write_into(output_file)

        Serialize the specification in concrete syntax; the output parses
        back into an identical specification.
        """
        for decl in self.decls:
            output_file.write(str(decl))
            output_file.write('\n')
        for equation in self.equation_list:
            output_file.write(str(equation))
            output_file.write('\n')

    def __str__(self):
        lines = [str(item) for item in self.decls + self.equation_list]
        return '\n'.join(lines) + '\n' if lines else ''

    def __eq__(self, other):
        if not isinstance(other, Spec):
            return NotImplemented
        return (self.decls == other.decls
                and self.equation_list == other.equation_list)

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    __hash__ = None


def format_spec(spec):
    """
    format_spec(spec) -> str

    Concrete syntax of `spec`, one declaration or equation per line.
    """
    return str(spec)
