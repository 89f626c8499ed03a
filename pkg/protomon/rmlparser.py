# -*- coding: utf-8 -*-
"""
Tokenizer, parser and validator for protocol specifications (.rml)

    spec        := { decl | equation }
    decl        := lident [ "(" lident { "," lident } ")" ] "matches"
                   body { "|" body } ";"
    body        := "{" [ constraint { "," constraint } ] "}"
    constraint  := key ":" fieldpat
    fieldpat    := string | number | "true" | "false" | "_" | lident | body
    equation    := uident "=" term ";"
    term        := orterm { "|" orterm }
    orterm      := andterm { "\\/" andterm }
    andterm     := seq { "/\\" seq }
    seq         := starred { starred }
    starred     := atom [ "*" ]
    atom        := lident [ "(" fieldpat { "," fieldpat } ")" ] | uident
                 | "(" term ")" | "{" "let" lident { "," lident } ";" term "}"
"""
import re
from collections import namedtuple

from protomon.rmlexc import ParseError, ValidationError
from protomon.rmlevent import (PatternBody, PatternDecl, Literal, Var,
                               Nested, WILDCARD)
from protomon.rmlspec import Equation, Spec
from protomon.rmlterm import (PatternRef, EqRef, Seq, Shuffle, And, Or, Let,
                              Star, Scope)

Token = namedtuple('Token', 'kind value offset')

KEYWORDS = frozenset(['matches', 'let', 'true', 'false'])

TOKEN_PATTERNS = (
    ('SKIP', r'\s+|//[^\n]*'),
    ('STRING', r"'(?:[^'\\\n]|\\.)*'"),
    ('NUMBER', r'-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?'),
    ('WILDCARD', r'_(?![A-Za-z0-9_])'),
    ('LIDENT', r'[a-z][A-Za-z0-9_]*'),
    ('UIDENT', r'[A-Z][A-Za-z0-9_]*'),
    ('OR', r'\\/'),
    ('AND', r'/\\'),
    ('PUNCT', r'[{}(),;:=*|]'),
    ('UNTERMINATED', r"'"),
    ('ERROR', r'.'),
)
RE_TOKEN = re.compile('|'.join('(?P<%s>%s)' % pair for pair in TOKEN_PATTERNS),
                      re.DOTALL)
RE_ESCAPE = re.compile(r'\\(.)', re.DOTALL)

# tokens that may open an atom, hence continue a sequence
ATOM_STARTS = ('LIDENT', 'UIDENT', '(', '{')


def _position(text, offset):
    offset = max(0, min(offset, len(text) - 1))
    line = text.count('\n', 0, offset) + 1
    column = offset - (text.rfind('\n', 0, offset) + 1) + 1
    return line, column


def tokenize(text):
    """
    tokenize(text) -> list of Token, ending with an 'EOF' token
    raise ParseError
    """
    tokens = []
    for match in RE_TOKEN.finditer(text):
        kind = match.lastgroup
        value = match.group()
        if kind == 'SKIP':
            continue
        if kind == 'UNTERMINATED':
            raise ParseError('unterminated-string', 'string is not closed',
                             *_position(text, match.start()))
        if kind == 'ERROR':
            raise ParseError('unexpected-character',
                             'unexpected character %r' % value,
                             *_position(text, match.start()))
        if kind == 'PUNCT':
            kind = value
        elif kind == 'LIDENT' and value in KEYWORDS:
            kind = value
        tokens.append(Token(kind, value, match.start()))
    stripped = text.rstrip()
    tokens.append(Token('EOF', '', max(len(stripped) - 1, 0)))
    return tokens


def _describe(token):
    if token.kind == 'EOF':
        return 'end of input'
    return repr(token.value)


class SpecParser(object):
    """
    Recursive descent parser. Precedence, loosest first: shuffle `|`,
    or `\\/`, and `/\\`, sequence (juxtaposition), postfix `*`.
    """

    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self):
        return self.tokens[self.index]

    def location(self, token=None):
        return _position(self.text, (token or self.current).offset)

    def error(self, expected):
        token = self.current
        kind = 'unexpected-end' if token.kind == 'EOF' else 'unexpected-token'
        raise ParseError(kind, 'expected %s but found %s'
                         % (expected, _describe(token)),
                         *self.location(token))

    def advance(self):
        token = self.current
        if token.kind != 'EOF':
            self.index += 1
        return token

    def accept(self, kind):
        if self.current.kind == kind:
            return self.advance()
        return None

    def expect(self, kind, expected=None):
        if self.current.kind != kind:
            self.error(expected or repr(kind))
        return self.advance()

    def parse(self):
        decls = []
        equations = []
        while self.current.kind != 'EOF':
            if self.current.kind == 'LIDENT':
                decls.append(self.parse_decl())
            elif self.current.kind == 'UIDENT':
                equations.append(self.parse_equation())
            else:
                self.error('a declaration or an equation')
        return Spec(decls, equations)

    def parse_decl(self):
        location = self.location()
        name = self.advance().value
        params = []
        if self.accept('('):
            params.append(self.expect('LIDENT', 'a parameter name').value)
            while self.accept(','):
                params.append(self.expect('LIDENT', 'a parameter name').value)
            self.expect(')')
        self.expect('matches')
        alternatives = [self.parse_body()]
        while self.accept('|'):
            alternatives.append(self.parse_body())
        self.expect(';')
        return PatternDecl(name, tuple(params), tuple(alternatives),
                           location=location)

    def parse_body(self):
        self.expect('{', "'{'")
        constraints = []
        if self.current.kind != '}':
            constraints.append(self.parse_constraint())
            while self.accept(','):
                constraints.append(self.parse_constraint())
        self.expect('}', "',' or '}'")
        return PatternBody(tuple(constraints))

    def parse_constraint(self):
        token = self.current
        if token.kind == 'STRING':
            key = self.unquote(token.value)
        elif token.kind in ('LIDENT', 'UIDENT') or token.kind in KEYWORDS:
            key = token.value
        else:
            self.error('a key')
        self.advance()
        self.expect(':', "':'")
        return key, self.parse_fieldpat()

    def parse_fieldpat(self):
        token = self.current
        if token.kind == 'STRING':
            self.advance()
            return Literal(self.unquote(token.value))
        if token.kind == 'NUMBER':
            self.advance()
            if any(mark in token.value for mark in '.eE'):
                return Literal(float(token.value))
            return Literal(int(token.value))
        if token.kind in ('true', 'false'):
            self.advance()
            return Literal(token.kind == 'true')
        if token.kind == 'WILDCARD':
            self.advance()
            return WILDCARD
        if token.kind == 'LIDENT':
            self.advance()
            return Var(token.value)
        if token.kind == '{':
            return Nested(self.parse_body())
        self.error('a value, a variable, _ or {')

    @staticmethod
    def unquote(value):
        return RE_ESCAPE.sub(lambda match: match.group(1), value[1:-1])

    def parse_equation(self):
        location = self.location()
        name = self.advance().value
        self.expect('=', "'='")
        body = self.parse_term()
        self.expect(';', "';'")
        return Equation(name, body, location=location)

    def parse_term(self):
        term = self.parse_or()
        while self.accept('|'):
            term = Shuffle(term, self.parse_or())
        return term

    def parse_or(self):
        term = self.parse_and()
        while self.accept('OR'):
            term = Or(term, self.parse_and())
        return term

    def parse_and(self):
        term = self.parse_seq()
        while self.accept('AND'):
            term = And(term, self.parse_seq())
        return term

    def parse_seq(self):
        term = self.parse_starred()
        while self.current.kind in ATOM_STARTS:
            term = Seq(term, self.parse_starred())
        return term

    def parse_starred(self):
        term = self.parse_atom()
        if self.accept('*'):
            term = Star(term)
        return term

    def parse_atom(self):
        token = self.current
        location = self.location()
        if token.kind == 'LIDENT':
            self.advance()
            args = []
            if self.accept('('):
                args.append(self.parse_fieldpat())
                while self.accept(','):
                    args.append(self.parse_fieldpat())
                self.expect(')', "',' or ')'")
            return PatternRef(token.value, tuple(args), location=location)
        if token.kind == 'UIDENT':
            self.advance()
            return EqRef(token.value, location=location)
        if token.kind == '(':
            self.advance()
            term = self.parse_term()
            self.expect(')', "')'")
            return term
        if token.kind == '{':
            self.advance()
            self.expect('let', "'let'")
            names = [self.expect('LIDENT', 'a variable name').value]
            while self.accept(','):
                names.append(self.expect('LIDENT', 'a variable name').value)
            self.expect(';', "';'")
            body = self.parse_term()
            self.expect('}', "'}'")
            return Let(tuple(names), body, location=location)
        self.error('a term')


def parse_spec(text):
    """
    parse_spec(text) -> Spec

    Raise the first ParseError met. The result is not validated.
    """
    parser = SpecParser(text)
    try:
        return parser.parse()
    except RecursionError:
        raise ParseError('too-deep', 'terms or patterns are nested too deeply',
                         *parser.location())


class SpecValidator(object):
    """
    Static checks on a parsed specification: name resolution, arities,
    variable scoping and guarded recursion.
    """

    def __init__(self, spec):
        self.spec = spec
        self.errors = []

    def report(self, kind, message, location):
        self.errors.append(ValidationError(kind, message, *location))

    def validate(self):
        self.check_duplicates()
        if Spec.ENTRY not in self.spec.equations:
            self.report('missing-main', 'no %s equation' % Spec.ENTRY, (1, 1))
        for equation in self.spec.equation_list:
            self.check_term(equation.body, frozenset())
        self.check_guarded()
        return self.errors

    def check_duplicates(self):
        seen = set()
        for decl in self.spec.decls:
            if decl.name in seen:
                self.report('duplicate-declaration',
                            'event type %s is declared twice' % decl.name,
                            decl.location)
            seen.add(decl.name)
            if len(set(decl.params)) != len(decl.params):
                self.report('duplicate-parameter',
                            'event type %s repeats a parameter' % decl.name,
                            decl.location)
        seen = set()
        for equation in self.spec.equation_list:
            if equation.name in seen:
                self.report('duplicate-equation',
                            'equation %s is defined twice' % equation.name,
                            equation.location)
            seen.add(equation.name)

    def check_term(self, term, scope):
        if isinstance(term, PatternRef):
            self.check_pattern_ref(term, scope)
        elif isinstance(term, EqRef):
            if term.name not in self.spec.equations:
                self.report('undefined-equation',
                            'equation %s is not defined' % term.name,
                            term.location)
        elif isinstance(term, Let):
            if len(set(term.names)) != len(term.names):
                self.report('duplicate-variable',
                            'let repeats a variable', term.location)
            self.check_term(term.body, scope | frozenset(term.names))
        elif isinstance(term, (Star, Scope)):
            self.check_term(term.body, scope)
        elif isinstance(term, (Seq, Shuffle, And, Or)):
            self.check_term(term.left, scope)
            self.check_term(term.right, scope)

    def check_pattern_ref(self, term, scope):
        decl = self.spec.decl_map.get(term.name)
        if decl is None:
            self.report('undefined-pattern',
                        'event type %s is not declared' % term.name,
                        term.location)
            return
        if decl.arity != len(term.args):
            self.report('arity-mismatch', '%s expects %d arguments, got %d'
                        % (term.name, decl.arity, len(term.args)),
                        term.location)
        for arg in term.args:
            for name in arg.variables():
                if name not in scope:
                    self.report('unbound-variable',
                                'variable %s is not declared by an '
                                'enclosing let' % name, term.location)
        for name in decl.free_variables():
            if name not in scope:
                self.report('unbound-variable',
                            'event type %s uses variable %s which no '
                            'enclosing let declares' % (term.name, name),
                            term.location)

    def unguarded_refs(self, term):
        """
        Equation names reachable from `term` before any event is consumed.
        """
        if isinstance(term, EqRef):
            return set([term.name])
        if isinstance(term, Seq):
            refs = self.unguarded_refs(term.left)
            if self.spec.nullable(term.left):
                refs |= self.unguarded_refs(term.right)
            return refs
        if isinstance(term, (Shuffle, And, Or)):
            return self.unguarded_refs(term.left) | \
                self.unguarded_refs(term.right)
        if isinstance(term, (Star, Let, Scope)):
            return self.unguarded_refs(term.body)
        return set()

    def check_guarded(self):
        graph = dict((name, self.unguarded_refs(body) & set(self.spec.equations))
                     for name, body in self.spec.equations.items())
        for equation in self.spec.equation_list:
            if equation.name not in graph or \
                    self.spec.equations[equation.name] is not equation.body:
                continue
            reached = set()
            pending = list(graph[equation.name])
            while pending:
                name = pending.pop()
                if name not in reached:
                    reached.add(name)
                    pending.extend(graph[name])
            if equation.name in reached:
                self.report('unguarded-recursion',
                            'equation %s may recur without consuming an event'
                            % equation.name, equation.location)


def validate_spec(spec):
    """
    validate_spec(spec) -> list of ValidationError, empty for a sound spec
    """
    try:
        return SpecValidator(spec).validate()
    except RecursionError:
        return [ValidationError('too-deep',
                                'terms are nested too deeply to check')]
