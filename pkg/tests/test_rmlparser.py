#!/usr/bin/env python
# -*- coding: utf-8 -*-

import os
import sys
import random
import unittest
from io import StringIO

file_path = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
sys.path.insert(0, file_path)

import protomon
from protomon import (InvalidSpec, ParseError, Spec, UndecodableFile,
                      parse_spec, validate_spec)
from protomon.rmlevent import (WILDCARD, Literal, Nested, PatternBody, Var,
                               format_atom)
from protomon.rmlparser import tokenize
from protomon.rmlterm import (And, EqRef, Let, Or, PatternRef, Seq, Shuffle,
                              Star)

SPECS_PATH = os.path.join(file_path, 'protomon', 'specs')
LETTERS = 'abcdef'
DECLS = ''.join('%s matches {};\n' % name for name in LETTERS)


def ref(name, *args):
    return PatternRef(name, tuple(args))


def main_of(source):
    return parse_spec(DECLS + source).equations['Main']


def kinds(errors):
    return sorted(error.kind for error in errors)


class TestShippedSpecs(unittest.TestCase):

    def setUp(self):
        self.topic_change_path = os.path.join(SPECS_PATH, 'topic_change.rml')
        self.question_answer_path = os.path.join(SPECS_PATH,
                                                 'question_answer.rml')

    def test_question_answer(self):
        spec = protomon.open(self.question_answer_path)
        self.assertEqual([decl.name for decl in spec.decls],
                         ['question', 'answer'])
        self.assertEqual([decl.params for decl in spec.decls],
                         [('ag1', 'ag2'), ('ag1', 'ag2')])
        self.assertEqual(list(spec.equations), ['Main'])
        self.assertEqual(spec.entry, Star(Let(('ag1', 'ag2'), Seq(
            ref('question', Var('ag1'), Var('ag2')),
            ref('answer', Var('ag2'), Var('ag1'))))))

    def test_topic_change(self):
        spec = protomon.open(self.topic_change_path)
        self.assertEqual(len(spec.decls), 5)
        self.assertEqual(len(spec.decl('constrained_question').alternatives),
                         5)
        self.assertEqual(sorted(spec.equations), [
            'Answer', 'ConstrainedQuestion', 'Main', 'Question'])
        self.assertEqual(spec.entry, Star(EqRef('Question')))
        self.assertEqual(spec.definition('Answer'), Or(
            Seq(ref('answer_with_constraint'), EqRef('ConstrainedQuestion')),
            ref('an_answer')))

    def test_repeated_keys_survive(self):
        spec = protomon.open(self.topic_change_path)
        content = dict(spec.decl('answer_with_constraint').alternatives[0]
                       .constraints)['content']
        self.assertEqual(content, Nested(PatternBody((
            ('name', Literal('answer')), ('name', Literal('result')),
            ('arg1', WILDCARD), ('arg2', WILDCARD)))))

    def test_shipped_specs_validate(self):
        for path in (self.topic_change_path, self.question_answer_path):
            spec = Spec.open(path, validate=False)
            self.assertEqual(validate_spec(spec), [])
            self.assertEqual(spec.encoding, 'utf_8')


class TestGrammar(unittest.TestCase):

    def test_precedence(self):
        self.assertEqual(main_of('Main = a b | c \\/ d /\\ e f*;'), Shuffle(
            Seq(ref('a'), ref('b')),
            Or(ref('c'), And(ref('d'), Seq(ref('e'), Star(ref('f')))))))

    def test_left_associative(self):
        self.assertEqual(main_of('Main = a | b | c;'),
                         Shuffle(Shuffle(ref('a'), ref('b')), ref('c')))
        self.assertEqual(main_of('Main = a b c;'),
                         Seq(Seq(ref('a'), ref('b')), ref('c')))
        self.assertEqual(main_of('Main = a \\/ b \\/ c;'),
                         Or(Or(ref('a'), ref('b')), ref('c')))

    def test_grouping(self):
        self.assertEqual(main_of('Main = (a | b) c;'),
                         Seq(Shuffle(ref('a'), ref('b')), ref('c')))
        self.assertEqual(main_of('Main = (a b)*;'),
                         Star(Seq(ref('a'), ref('b'))))
        self.assertEqual(main_of('Main = {let x, y; a} b;'),
                         Seq(Let(('x', 'y'), ref('a')), ref('b')))

    def test_field_patterns(self):
        spec = parse_spec("p(x) matches {a:'it\\'s', b:-2, c:1.5, d:true, "
                          "e:false, f:_, g:x, 'let':{h:y}} | {};\n"
                          "Main = {let y; p(_) p('v') p(3)};")
        decl = spec.decl('p')
        self.assertEqual(decl.alternatives[0].constraints, (
            ('a', Literal("it's")), ('b', Literal(-2)), ('c', Literal(1.5)),
            ('d', Literal(True)), ('e', Literal(False)), ('f', WILDCARD),
            ('g', Var('x')),
            ('let', Nested(PatternBody((('h', Var('y')),))))))
        self.assertEqual(decl.alternatives[1], PatternBody())
        self.assertEqual(decl.free_variables(), ['y'])
        self.assertEqual(spec.entry.body, Seq(Seq(
            ref('p', WILDCARD), ref('p', Literal('v'))), ref('p', Literal(3))))

    def test_comments(self):
        spec = parse_spec('// leading\np matches {}; // trailing\n'
                          'Main = p; // done')
        self.assertEqual(spec.entry, ref('p'))

    def test_empty_source(self):
        spec = parse_spec('  \n')
        self.assertEqual(spec.decls, [])
        self.assertEqual(spec.equations, {})


class TestParseErrors(unittest.TestCase):

    def assertParseError(self, text, kind, line, column):
        try:
            parse_spec(text)
        except ParseError as error:
            self.assertEqual((error.kind, error.line, error.column),
                             (kind, line, column))
            return error
        self.fail('%r parsed' % text)

    def test_missing_semicolon(self):
        error = self.assertParseError('Main = foo', 'unexpected-end', 1, 10)
        self.assertEqual(error.message, "expected ';' but found end of input")

    def test_unexpected_token(self):
        self.assertParseError('p matches {};\nMain = p ) ;', 'unexpected-token',
                              2, 10)

    def test_unexpected_character(self):
        self.assertParseError('Main = a # b;', 'unexpected-character', 1, 10)

    def test_unterminated_string(self):
        self.assertParseError("p matches {name:'abc};", 'unterminated-string',
                              1, 17)

    def test_let_requires_variables(self):
        self.assertParseError('Main = {let ; a};', 'unexpected-token', 1, 13)

    def test_uppercase_parameter(self):
        self.assertParseError('p(X) matches {};', 'unexpected-token', 1, 3)

    def test_from_string_raises(self):
        self.assertRaises(ParseError, protomon.from_string, 'Main = ;')

    def test_locations_stay_inside_the_text(self):
        vocabulary = ['Main', 'X', '=', 'p', 'q', '(', ')', '{', '}', 'let',
                      'x', ';', '*', '|', '\\/', '/\\', 'matches', ':',
                      "'s'", '-1', '_', ',', '\n', '#', "'open", 'true']
        generator = random.Random(2024)
        for _ in range(500):
            words = [generator.choice(vocabulary)
                     for _ in range(generator.randint(1, 12))]
            text = ' '.join(words)
            if not text.strip():
                continue
            try:
                parse_spec(text)
            except ParseError as error:
                lines = text.split('\n')
                self.assertTrue(1 <= error.line <= len(lines), text)
                self.assertTrue(
                    1 <= error.column <= max(1, len(lines[error.line - 1])),
                    text)

    def test_nesting_too_deep(self):
        for text in ('Main = ' + '(' * 5000 + 'a' + ')' * 5000 + ';',
                     'p matches ' + '{k:' * 5000 + '}' * 5000 + ';'):
            try:
                parse_spec(text)
            except ParseError as error:
                self.assertEqual(error.kind, 'too-deep')
                self.assertEqual(error.line, 1)
            else:
                self.fail('deeply nested text parsed')

    def test_tokenize_ends_with_eof(self):
        tokens = tokenize('Main = a;\n\n')
        self.assertEqual(tokens[-1].kind, 'EOF')
        self.assertEqual([token.kind for token in tokens[:-1]],
                         ['UIDENT', '=', 'LIDENT', ';'])


class TestValidation(unittest.TestCase):

    def validate(self, text):
        return validate_spec(parse_spec(text))

    def test_unguarded_recursion(self):
        self.assertEqual(kinds(self.validate('Main = X;\nX = X;')),
                         ['unguarded-recursion'])
        self.assertEqual(kinds(self.validate('p matches {};\nMain = p* Main;')),
                         ['unguarded-recursion'])
        self.assertEqual(kinds(self.validate(
            'p matches {};\nMain = A;\nA = B \\/ p;\nB = p | A;')),
            ['unguarded-recursion', 'unguarded-recursion'])

    def test_guarded_recursion(self):
        self.assertEqual(self.validate(
            'p matches {};\nq matches {};\nMain = A;\nA = p B \\/ q;\nB = q A;'),
            [])

    def test_unbound_variable(self):
        errors = self.validate('question(ag1, ag2) matches {sender:ag1};\n'
                               'Main = question(ag1, ag2);')
        self.assertEqual(kinds(errors), ['unbound-variable'] * 2)
        self.assertEqual((errors[0].line, errors[0].column), (2, 8))

    def test_free_variable_of_declaration(self):
        self.assertEqual(kinds(self.validate('p matches {sender:x};\n'
                                             'Main = p;')),
                         ['unbound-variable'])
        self.assertEqual(self.validate('p matches {sender:x};\n'
                                       'Main = {let x; p p};'), [])

    def test_names_resolve(self):
        self.assertEqual(kinds(self.validate('Main = X;')),
                         ['undefined-equation'])
        self.assertEqual(kinds(self.validate('Main = foo;')),
                         ['undefined-pattern'])
        self.assertEqual(kinds(self.validate('p(x) matches {};\n'
                                             'Main = p;')),
                         ['arity-mismatch'])
        self.assertEqual(kinds(self.validate('p matches {};\nA = p;')),
                         ['missing-main'])

    def test_duplicates(self):
        self.assertEqual(kinds(self.validate(
            'p(x, x) matches {};\np matches {};\n'
            'Main = {let y, y; p(y, y)};\nMain = p;')), [
            'arity-mismatch', 'duplicate-declaration', 'duplicate-equation',
            'duplicate-parameter', 'duplicate-variable'])

    def test_long_sequence_too_deep(self):
        spec = parse_spec(DECLS + 'Main = ' + 'a ' * 3000 + ';')
        self.assertEqual(kinds(validate_spec(spec)), ['too-deep'])
        self.assertRaises(InvalidSpec, Spec.from_string,
                          DECLS + 'Main = ' + 'a ' * 3000 + ';')

    def test_from_string_raises(self):
        try:
            Spec.from_string('Main = X;')
        except InvalidSpec as error:
            self.assertEqual(kinds(error.errors), ['undefined-equation'])
        else:
            self.fail('invalid specification accepted')
        self.assertEqual(Spec.from_string('Main = X;', validate=False).entry,
                         EqRef('X'))


class TestPrinting(unittest.TestCase):

    SOURCES = [
        'Main = a b | c \\/ d /\\ e f*;',
        'Main = (a | b) (c \\/ d) (e /\\ f);',
        'Main = ((a b)*)* (a) (b c) {let x, y; a | b};',
        'Main = (a) (b | c);\nA = (a \\/ b) /\\ (c | d);',
        "p(x, y) matches {'let':{k:'it\\'s', 'odd key':-2.5}, b:true, "
        "c:_, d:x, e:y, e:x} | {};\nMain = {let v; p(v, 'w') p(_, 3)}*;",
    ]

    def test_round_trip(self):
        for source in self.SOURCES:
            spec = parse_spec(DECLS + source)
            self.assertEqual(parse_spec(protomon.format_spec(spec)), spec)

    def literal_of(self, value):
        source = 'p matches {k:%s};\nMain = p;' % format_atom(value)
        spec = parse_spec(source)
        self.assertEqual(parse_spec(str(spec)), spec, source)
        return spec.decl('p').alternatives[0].constraints[0][1].value

    def assertLiteralSurvives(self, value):
        parsed = self.literal_of(value)
        self.assertEqual(parsed, value)
        self.assertTrue(type(parsed) is type(value), repr(value))

    def test_literal_edge_cases(self):
        for value in (0.0000001, 100000000000000000000.0, -2.5e-12, 1e16,
                      'x\\\ny', "it's", '\\', '\n', 'café', -7, True,
                      False, ''):
            self.assertLiteralSurvives(value)
        self.assertEqual(self.literal_of(0.0000001), 1e-07)
        self.assertEqual(parse_spec("p matches {k:1e-07, j:2E3};\nMain = p;")
                         .decl('p').alternatives[0].constraints[1][1].value,
                         2000.0)

    def test_generated_literals(self):
        characters = ['a', 'Z', ' ', "'", '\\', '\n', '\t', '_', '1',
                      'é', '→']
        generator = random.Random(7)
        for _ in range(300):
            kind = generator.choice(('string', 'int', 'float', 'bool'))
            if kind == 'string':
                value = ''.join(generator.choice(characters)
                                for _ in range(generator.randint(0, 8)))
            elif kind == 'int':
                value = generator.randint(-10 ** 12, 10 ** 12)
            elif kind == 'float':
                value = (generator.uniform(-1, 1) *
                         10 ** generator.randint(-15, 25))
            else:
                value = generator.random() < 0.5
            self.assertLiteralSurvives(value)

    def test_shipped_specs_round_trip(self):
        for name in ('topic_change.rml', 'question_answer.rml'):
            spec = protomon.open(os.path.join(SPECS_PATH, name))
            self.assertEqual(protomon.from_string(str(spec)), spec)

    def test_format(self):
        spec = parse_spec(DECLS + 'Main = (b | c)* a;')
        self.assertEqual(str(spec.equation_list[0]), 'Main = (b | c)* a;')
        self.assertEqual(str(spec.decl('a')), 'a matches {};')

    def test_write_into(self):
        spec = protomon.open(os.path.join(SPECS_PATH, 'question_answer.rml'))
        output = StringIO()
        spec.write_into(output)
        self.assertEqual(output.getvalue(), str(spec))
        self.assertTrue(output.getvalue().endswith(
            'Main = {let ag1, ag2; question(ag1, ag2) answer(ag2, ag1)}*;\n'))


class TestSave(unittest.TestCase):

    def setUp(self):
        self.temp_path = os.path.join(file_path, 'tests', 'static',
                                      'temp.rml')

    def tearDown(self):
        if os.path.exists(self.temp_path):
            os.remove(self.temp_path)

    def test_save_and_detect_encoding(self):
        spec = protomon.from_string(
            u"p matches {name:'café'};\nMain = p*;")
        spec.save(self.temp_path, encoding='utf_16')
        reloaded = protomon.open(self.temp_path)
        self.assertEqual(reloaded, spec)
        self.assertEqual(reloaded.encoding, 'utf_16_le')
        self.assertEqual(reloaded.path, self.temp_path)

    def test_explicit_encoding(self):
        spec = protomon.from_string(
            u"p matches {name:'café'};\nMain = p*;")
        spec.save(self.temp_path, encoding='latin_1')
        self.assertEqual(protomon.open(self.temp_path, encoding='latin-1'),
                         spec)

    def test_undecodable(self):
        path = os.path.join(file_path, 'tests', 'static', 'invalid_utf8.rml')
        self.assertRaises(UndecodableFile, protomon.open, path,
                          encoding='utf-8')


if __name__ == '__main__':
    unittest.main()
