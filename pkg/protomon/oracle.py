# -*- coding: utf-8 -*-
"""
Bounded denotational semantics of specifications.

Builds the set of traces of a term directly from the set definitions of the
operators (singleton, concatenation, interleaving, intersection, union,
projection of let variables, iteration), without going through derivatives.
Meant as a brute force reference for tests of the online monitor.
"""
from itertools import combinations

from protomon.rmlevent import EMPTY_BINDING, match_decl
from protomon.rmlspec import Spec
from protomon.rmlterm import (EqRef, PatternRef, Seq, Shuffle, And, Or, Let,
                              Star, Epsilon)


def interleavings(first, second):
    """
    All merges of the two tuples preserving the order inside each of them.
    """
    length = len(first) + len(second)
    for positions in combinations(range(length), len(first)):
        chosen = set(positions)
        left = iter(first)
        right = iter(second)
        yield tuple(next(left) if index in chosen else next(right)
                    for index in range(length))


class TraceOracle(object):
    """
    TraceOracle(spec, alphabet)

    `language(term, binding, budget)` returns the set of (trace, binding)
    pairs of `term` with traces no longer than `budget` events drawn from
    `alphabet`; the binding is the one in force after the trace.
    """

    def __init__(self, spec, alphabet):
        self.spec = spec
        self.alphabet = list(dict.fromkeys(alphabet))
        self._cache = {}

    def language(self, term, binding=EMPTY_BINDING, budget=0):
        key = (term, binding, budget)
        if key not in self._cache:
            self._cache[key] = frozenset(self._language(term, binding, budget))
        return self._cache[key]

    def _language(self, term, binding, budget):
        if isinstance(term, Epsilon):
            return set([((), binding)])
        if isinstance(term, PatternRef):
            if budget < 1:
                return set()
            decl = self.spec.decl(term.name)
            return set(((event,), extended) for event in self.alphabet
                       for extended in match_decl(decl, term.args, event,
                                                  binding))
        if isinstance(term, EqRef):
            return self.language(self.spec.definition(term.name), binding,
                                 budget)
        if isinstance(term, Or):
            return self.language(term.left, binding, budget) | \
                self.language(term.right, binding, budget)
        if isinstance(term, Seq):
            return self._concatenate(term, binding, budget)
        if isinstance(term, Shuffle):
            return self._shuffle(term, binding, budget)
        if isinstance(term, And):
            return self._intersect(term, binding, budget)
        if isinstance(term, Let):
            inner = binding.without(term.names)
            outer = binding.only(term.names)
            return set((trace, extended.restore(term.names, outer))
                       for trace, extended in self.language(term.body, inner,
                                                            budget))
        if isinstance(term, Star):
            return self._iterate(term, binding, budget)
        raise TypeError('not a specification term: %r' % (term,))

    def _concatenate(self, term, binding, budget):
        result = set()
        for first, middle in self.language(term.left, binding, budget):
            for second, last in self.language(term.right, middle,
                                              budget - len(first)):
                result.add((first + second, last))
        return result

    def _shuffle(self, term, binding, budget):
        result = set()
        for first, middle in self.language(term.left, binding, budget):
            for second, last in self.language(term.right, middle,
                                              budget - len(first)):
                for trace in interleavings(first, second):
                    result.add((trace, last))
        return result

    def _intersect(self, term, binding, budget):
        rights = {}
        for trace, extended in self.language(term.right, binding, budget):
            rights.setdefault(trace, []).append(extended)
        result = set()
        for trace, extended in self.language(term.left, binding, budget):
            for other in rights.get(trace, ()):
                merged = extended.merge(other)
                if merged is not None:
                    result.add((trace, merged))
        return result

    def _iterate(self, term, binding, budget):
        result = set([((), binding)])
        frontier = set(result)
        while frontier:
            discovered = set()
            for first, middle in frontier:
                for second, last in self.language(term.body, middle,
                                                  budget - len(first)):
                    item = (first + second, last)
                    if second and item not in result:
                        discovered.add(item)
            result |= discovered
            frontier = discovered
        return result


def enumerate_traces(spec, alphabet, max_len):
    """
    enumerate_traces(spec, alphabet, max_len) -> set of tuples of Event

    Traces of at most `max_len` events over `alphabet` belonging to the
    language of the entry equation. Keep `max_len` small: the cost grows
    with len(alphabet) ** max_len.
    """
    oracle = TraceOracle(spec, alphabet)
    return set(trace for trace, _ in
               oracle.language(EqRef(Spec.ENTRY), EMPTY_BINDING, max_len))


def prefixes(traces):
    """
    Every prefix (the empty one included) of the given traces.
    """
    result = set()
    for trace in traces:
        for end in range(len(trace) + 1):
            result.add(trace[:end])
    return result
