#!/usr/bin/env python
# -*- coding: utf-8 -*-

import os
import sys
import codecs
import unittest
from io import StringIO

file_path = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))
sys.path.insert(0, os.path.abspath(file_path))

import protomon
from protomon import Event, TraceFile, InvalidTraceLine, UndecodableFile


class TestOpen(unittest.TestCase):

    def setUp(self):
        self.static_path = os.path.join(file_path, 'tests', 'static')
        self.answered_path = os.path.join(self.static_path,
                                          'qa_answered.jsonl')
        self.invalid_path = os.path.join(self.static_path, 'invalid.jsonl')
        self.empty_path = os.path.join(self.static_path, 'empty.jsonl')
        self.bom_path = os.path.join(self.static_path, 'bom.jsonl')

    def test_utf8(self):
        trace = TraceFile.open(self.answered_path)
        self.assertEqual(len(trace), 4)
        self.assertEqual(trace.encoding, 'utf_8')
        self.assertEqual(trace.path, self.answered_path)
        self.assertEqual(trace[1].content, {'name': 'freeBeds', 'arg1': 3})

    def test_byte_order_mark(self):
        trace = TraceFile.open(self.bom_path)
        self.assertEqual(len(trace), 2)
        self.assertEqual(trace[0].sender, 'operator')

    def test_empty(self):
        self.assertEqual(len(TraceFile.open(self.empty_path)), 0)

    def test_error_pass(self):
        trace = TraceFile.open(self.invalid_path)
        self.assertEqual([event.performative for event in trace],
                         ['question', 'assert'])

    def test_error_log(self):
        with self.assertLogs('protomon.tracefile', 'WARNING') as captured:
            trace = TraceFile.open(self.invalid_path,
                                   error_handling=TraceFile.ERROR_LOG)
        self.assertEqual(len(trace), 2)
        self.assertEqual(len(captured.records), 2)
        self.assertTrue('line 2' in captured.output[0])
        self.assertTrue('line 3' in captured.output[1])

    def test_error_raise(self):
        try:
            TraceFile.open(self.invalid_path,
                           error_handling=protomon.ERROR_RAISE)
        except InvalidTraceLine as error:
            self.assertEqual(error.line, 2)
            self.assertTrue(str(error).startswith('line 2: '))
        else:
            self.fail('InvalidTraceLine not raised')

    def test_undecodable(self):
        path = os.path.join(self.static_path, 'invalid_utf8.jsonl')
        try:
            TraceFile.open(path, encoding='utf-8',
                           error_handling=TraceFile.ERROR_RAISE)
        except UndecodableFile as error:
            self.assertTrue(isinstance(error, protomon.Error))
            self.assertEqual(error.path, path)
            self.assertEqual(error.encoding, 'utf_8')
            self.assertTrue(str(error).startswith('can not read %s' % path))
        else:
            self.fail('UndecodableFile not raised')

    def test_error_raise_reports_missing_keys(self):
        source = ('{"performative":"question","sender":"a","receiver":"b"}\n'
                  '{"performative":"assert","receiver":"a"}\n')
        try:
            TraceFile.from_string(source, error_handling=TraceFile.ERROR_RAISE)
        except InvalidTraceLine as error:
            self.assertEqual(error.line, 2)
            self.assertTrue("'sender'" in error.reason)
        else:
            self.fail('InvalidTraceLine not raised')


class TestFromString(unittest.TestCase):

    def setUp(self):
        self.static_path = os.path.join(file_path, 'tests', 'static')
        self.answered_path = os.path.join(self.static_path,
                                          'qa_answered.jsonl')

    def test_compare_from_string_and_from_path(self):
        content = codecs.open(self.answered_path, encoding='utf_8').read()
        self.assertEqual(list(TraceFile.from_string(content)),
                         list(TraceFile.open(self.answered_path)))

    def test_blank_lines(self):
        source = ('\n{"performative":"question","sender":"a","receiver":"b"}'
                  '\n   \n\n')
        self.assertEqual(len(TraceFile.from_string(source)), 1)

    def test_keyword_arguments(self):
        trace = TraceFile.from_string('', path='out.jsonl',
                                      encoding='latin_1')
        self.assertEqual(trace.path, 'out.jsonl')
        self.assertEqual(trace.encoding, 'latin_1')


class TestStream(unittest.TestCase):

    def test_lazy(self):
        lines = iter(['{"performative":"question","sender":"a",'
                      '"receiver":"b"}\n', '{broken\n'])
        events = TraceFile.stream(lines, error_handling=TraceFile.ERROR_RAISE)
        self.assertEqual(next(events).receiver, 'b')
        self.assertRaises(InvalidTraceLine, next, events)

    def test_module_shortcut(self):
        events = list(protomon.stream(StringIO(
            u'{"performative":"question","sender":"a","receiver":"b"}\n')))
        self.assertEqual(events, [Event({'performative': 'question',
                                         'sender': 'a', 'receiver': 'b'})])


class TestSerialization(unittest.TestCase):

    def setUp(self):
        self.static_path = os.path.join(file_path, 'tests', 'static')
        self.answered_path = os.path.join(self.static_path,
                                          'qa_answered.jsonl')
        self.temp_path = os.path.join(self.static_path, 'temp.jsonl')

    def tearDown(self):
        if os.path.exists(self.temp_path):
            os.remove(self.temp_path)

    def test_write_into(self):
        trace = TraceFile([Event({'performative': 'question', 'sender': 'a',
                                  'receiver': 'b',
                                  'content': {'name': ['answer', 'result']}})])
        output = StringIO()
        trace.write_into(output)
        self.assertEqual(output.getvalue(),
                         '{"performative":"question","sender":"a",'
                         '"receiver":"b","content":{"name":'
                         '["answer","result"]}}\n')

    def test_save_and_reopen(self):
        trace = TraceFile.open(self.answered_path)
        trace.save(self.temp_path)
        self.assertEqual(list(TraceFile.open(self.temp_path)), list(trace))

    def test_save_with_encoding(self):
        trace = TraceFile.open(self.answered_path)
        trace.save(self.temp_path, encoding='utf_16')
        reopened = TraceFile.open(self.temp_path)
        self.assertEqual(reopened.encoding, 'utf_16_le')
        self.assertEqual(list(reopened), list(trace))

    def test_save_to_initial_path(self):
        trace = TraceFile([], path=self.temp_path)
        trace.append(Event({'performative': 'warn', 'sender': 'monitor',
                            'receiver': 'operator'}))
        trace.save()
        self.assertEqual(len(TraceFile.open(self.temp_path)), 1)


if __name__ == '__main__':
    unittest.main()
