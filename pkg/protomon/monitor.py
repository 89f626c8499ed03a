# -*- coding: utf-8 -*-
"""
Online verdict engine.

A monitor state is the set of configurations (residual term, binding) still
viable after the events seen so far. Each relevant event rewrites every
configuration into its derivatives; an empty set is a violation, and it is
latched.
"""
import logging
from collections import namedtuple
from dataclasses import dataclass, replace
from enum import Enum

from protomon.rmlevent import (EMPTY_BINDING, Binding, Literal, Var,
                               match_decl, is_relevant)
from protomon.rmlspec import Spec
from protomon.rmlterm import (EPSILON, EqRef, PatternRef, Seq, Shuffle, And,
                              Or, Let, Star, Epsilon, Scope, format_term)

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    ACCEPTING = 'accepting'
    CONTINUING = 'continuing'
    VIOLATION = 'violation'

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Configuration(object):
    residual: object
    binding: Binding = EMPTY_BINDING

    def __str__(self):
        return '%s %r' % (format_term(self.residual), self.binding)


@dataclass(frozen=True)
class MonitorState(object):
    configs: frozenset
    latched_violation: bool = False
    events_consumed: int = 0


def new_monitor(spec):
    """
    new_monitor(spec) -> MonitorState

    `spec` must have been validated: derivation relies on guarded recursion
    to terminate.
    """
    initial = Configuration(EqRef(Spec.ENTRY), EMPTY_BINDING)
    return MonitorState(frozenset([initial]))


def nullable(config, spec):
    return spec.nullable(config.residual)


def _derive(term, event, binding, spec):
    if isinstance(term, PatternRef):
        decl = spec.decl(term.name)
        for extended in match_decl(decl, term.args, event, binding):
            yield EPSILON, extended
    elif isinstance(term, Seq):
        for left, extended in _derive(term.left, event, binding, spec):
            yield Seq(left, term.right), extended
        if spec.nullable(term.left):
            for item in _derive(term.right, event, binding, spec):
                yield item
    elif isinstance(term, Shuffle):
        for left, extended in _derive(term.left, event, binding, spec):
            yield Shuffle(left, term.right), extended
        for right, extended in _derive(term.right, event, binding, spec):
            yield Shuffle(term.left, right), extended
    elif isinstance(term, And):
        rights = list(_derive(term.right, event, binding, spec))
        for left, left_binding in _derive(term.left, event, binding, spec):
            for right, right_binding in rights:
                merged = left_binding.merge(right_binding)
                if merged is not None:
                    yield And(left, right), merged
    elif isinstance(term, Or):
        for item in _derive(term.left, event, binding, spec):
            yield item
        for item in _derive(term.right, event, binding, spec):
            yield item
    elif isinstance(term, Star):
        # empty iterations consume nothing, skipping them keeps this finite
        for body, extended in _derive(term.body, event, binding, spec):
            yield Seq(body, term), extended
    elif isinstance(term, Let):
        # re-entering a let starts with its names unbound
        inner = binding.without(term.names)
        for body, extended in _derive(term.body, event, inner, spec):
            yield _split_scope(term.names, body, extended, binding)
    elif isinstance(term, Scope):
        inner = binding.restore(term.names, term.local)
        for body, extended in _derive(term.body, event, inner, spec):
            yield _split_scope(term.names, body, extended, binding)
    elif isinstance(term, EqRef):
        for item in _derive(spec.definition(term.name), event, binding, spec):
            yield item
    elif not isinstance(term, Epsilon):
        raise TypeError('not a term: %r' % (term,))


def _split_scope(names, body, extended, outer):
    """
    Keep the values of `names` inside the scope and give the enclosing
    context back its own binding for them.
    """
    local = extended.only(names)
    return Scope(names, body, local), extended.restore(names, outer.only(names))


def _normalize(term):
    if isinstance(term, Seq):
        left = _normalize(term.left)
        if isinstance(left, Epsilon):
            return term.right
        return Seq(left, term.right)
    if isinstance(term, (Shuffle, And)):
        left = _normalize(term.left)
        right = _normalize(term.right)
        if isinstance(left, Epsilon) and isinstance(right, Epsilon):
            return EPSILON
        if isinstance(term, Shuffle) and isinstance(left, Epsilon):
            return right
        if isinstance(term, Shuffle) and isinstance(right, Epsilon):
            return left
        return type(term)(left, right)
    if isinstance(term, Scope):
        body = _normalize(term.body)
        if isinstance(body, Epsilon):
            return EPSILON
        return Scope(term.names, body, term.local)
    return term


def derive(state, event, spec):
    """
    derive(state, event, spec) -> MonitorState

    Successor state after `event`. An empty configuration set latches the
    violation.
    """
    configs = set()
    for config in state.configs:
        for residual, binding in _derive(config.residual, event,
                                         config.binding, spec):
            configs.add(Configuration(_normalize(residual), binding))
    return MonitorState(frozenset(configs), latched_violation=not configs,
                        events_consumed=state.events_consumed + 1)


def verdict_of(state, spec):
    if state.latched_violation or not state.configs:
        return Verdict.VIOLATION
    if any(nullable(config, spec) for config in state.configs):
        return Verdict.ACCEPTING
    return Verdict.CONTINUING


def step(state, event, spec):
    """
    step(state, event, spec) -> (MonitorState, Verdict)

    Events matching no declared event type leave the configurations alone.
    The event counter advances in every case.
    """
    if state.latched_violation:
        return replace(state, events_consumed=state.events_consumed + 1), \
            Verdict.VIOLATION
    if not is_relevant(spec.decls, event):
        new_state = replace(state, events_consumed=state.events_consumed + 1)
        return new_state, verdict_of(new_state, spec)
    new_state = derive(state, event, spec)
    return new_state, verdict_of(new_state, spec)


def _ground(arg, binding):
    if isinstance(arg, Var) and arg.name in binding:
        return Literal(binding[arg.name])
    return arg


def _first_patterns(term, binding, spec, expanding):
    if isinstance(term, PatternRef):
        yield PatternRef(term.name, tuple(_ground(arg, binding)
                                          for arg in term.args))
    elif isinstance(term, Seq):
        for ref in _first_patterns(term.left, binding, spec, expanding):
            yield ref
        if spec.nullable(term.left):
            for ref in _first_patterns(term.right, binding, spec, expanding):
                yield ref
    elif isinstance(term, (Shuffle, And, Or)):
        for side in (term.left, term.right):
            for ref in _first_patterns(side, binding, spec, expanding):
                yield ref
    elif isinstance(term, Let):
        for ref in _first_patterns(term.body, binding.without(term.names),
                                   spec, expanding):
            yield ref
    elif isinstance(term, Scope):
        for ref in _first_patterns(term.body,
                                   binding.restore(term.names, term.local),
                                   spec, expanding):
            yield ref
    elif isinstance(term, Star):
        for ref in _first_patterns(term.body, binding, spec, expanding):
            yield ref
    elif isinstance(term, EqRef) and term.name not in expanding:
        for ref in _first_patterns(spec.definition(term.name), binding, spec,
                                   expanding | frozenset([term.name])):
            yield ref


def expected_patterns(state, spec):
    """
    expected_patterns(state, spec) -> sorted list of str

    Event types (with the variables bound so far filled in) that `state`
    could consume next.
    """
    refs = set()
    for config in state.configs:
        refs.update(_first_patterns(config.residual, config.binding, spec,
                                    frozenset()))
    return sorted(format_term(ref) for ref in refs)


Outcome = namedtuple('Outcome', 'index relevant verdict')


class Monitor(object):
    """
    Monitor(spec)

    Owner of one monitor state. Events must be fed serially, in observation
    order.
    """

    def __init__(self, spec):
        self.spec = spec
        self.state = new_monitor(spec)
        self.violation_index = None
        self.violating_event = None
        self.expected_at_violation = []

    @property
    def events_consumed(self):
        return self.state.events_consumed

    @property
    def verdict(self):
        return verdict_of(self.state, self.spec)

    @property
    def violated(self):
        return self.state.latched_violation

    def expected(self):
        return expected_patterns(self.state, self.spec)

    def feed(self, event):
        """
        feed(event) -> Outcome(index, relevant, verdict)
        """
        relevant = is_relevant(self.spec.decls, event)
        previous = self.state
        self.state, verdict = step(previous, event, self.spec)
        index = self.state.events_consumed
        if verdict is Verdict.VIOLATION and self.violation_index is None:
            self.violation_index = index
            self.violating_event = event
            self.expected_at_violation = expected_patterns(previous,
                                                           self.spec)
            logger.debug('violation at event %d: %r', index, event)
        return Outcome(index, relevant, verdict)
