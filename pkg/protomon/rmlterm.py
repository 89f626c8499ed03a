# -*- coding: utf-8 -*-
"""
Trace expression terms
"""
from dataclasses import dataclass, field

from protomon.rmlevent import EMPTY_BINDING, Binding

SHUFFLE_LEVEL = 1
OR_LEVEL = 2
AND_LEVEL = 3
SEQ_LEVEL = 4
STAR_LEVEL = 5
ATOM_LEVEL = 6


class Term(object):

    level = ATOM_LEVEL

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True)
class PatternRef(Term):
    name: str
    args: tuple = ()
    location: tuple = field(default=(1, 1), compare=False, hash=False,
                            repr=False)


@dataclass(frozen=True)
class EqRef(Term):
    name: str
    location: tuple = field(default=(1, 1), compare=False, hash=False,
                            repr=False)


@dataclass(frozen=True)
class Seq(Term):
    left: Term
    right: Term
    level = SEQ_LEVEL


@dataclass(frozen=True)
class Shuffle(Term):
    left: Term
    right: Term
    level = SHUFFLE_LEVEL


@dataclass(frozen=True)
class And(Term):
    left: Term
    right: Term
    level = AND_LEVEL


@dataclass(frozen=True)
class Or(Term):
    left: Term
    right: Term
    level = OR_LEVEL


@dataclass(frozen=True)
class Let(Term):
    names: tuple
    body: Term
    location: tuple = field(default=(1, 1), compare=False, hash=False,
                            repr=False)


@dataclass(frozen=True)
class Star(Term):
    body: Term
    level = STAR_LEVEL


@dataclass(frozen=True)
class Epsilon(Term):
    pass


EPSILON = Epsilon()


@dataclass(frozen=True)
class Scope(Term):
    """
    Residual of a `let` whose body has started consuming events. `local`
    holds the values bound to its names so far; they are invisible outside
    and vanish with the scope. Never produced by the parser.
    """
    names: tuple
    body: Term
    local: Binding = EMPTY_BINDING


BINARY_OPERATORS = {
    Seq: ' ',
    Shuffle: ' | ',
    And: ' /\\ ',
    Or: ' \\/ ',
}


def format_term(term, level=0):
    """
    format_term(term) -> str

    Concrete syntax for `term` with the parentheses its operator precedence
    requires. Residual-only nodes are rendered for debugging and do not
    parse back.
    """
    if isinstance(term, PatternRef):
        text = term.name
        if term.args:
            text += '(%s)' % ', '.join(str(arg) for arg in term.args)
    elif isinstance(term, EqRef):
        text = term.name
    elif type(term) in BINARY_OPERATORS:
        # binary operators associate to the left
        left = format_term(term.left, term.level)
        right = format_term(term.right, term.level + 1)
        if (isinstance(term, Seq) and right.startswith('(')
                and (left[-1].isalnum() or left[-1] == '_')):
            # `p (q)` would read as the pattern p applied to q
            left = '(%s)' % left
        text = left + BINARY_OPERATORS[type(term)] + right
    elif isinstance(term, Star):
        text = format_term(term.body, ATOM_LEVEL) + '*'
    elif isinstance(term, Let):
        text = '{let %s; %s}' % (', '.join(term.names),
                                 format_term(term.body))
    elif isinstance(term, Scope):
        text = '{in %s; %s}' % (', '.join(term.names),
                                format_term(term.body))
    elif isinstance(term, Epsilon):
        text = '<empty>'
    else:
        raise TypeError('not a term: %r' % (term,))
    if term.level < level:
        return '(%s)' % text
    return text
