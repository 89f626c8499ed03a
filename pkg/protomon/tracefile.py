# -*- coding: utf-8 -*-
import codecs
import logging
from collections import UserList
from itertools import count

from protomon.rmlexc import InvalidEvent, InvalidTraceLine, UndecodableFile
from protomon.rmlevent import Event
from protomon.textio import detect_encoding, normalize_encoding

logger = logging.getLogger(__name__)


class TraceFile(UserList):
    """
    Recorded trace: one JSON event object per line (JSON-lines).

    TraceFile(items, path, encoding)

    items -> list of Event. Default to [].
    path -> str: path where the trace will be saved. To read an existing
        file see TraceFile.open.
    encoding -> str: encoding used at save. Default to utf-8.
    """
    ERROR_PASS = 0
    ERROR_LOG = 1
    ERROR_RAISE = 2

    DEFAULT_ENCODING = 'utf_8'

    def __init__(self, items=None, path=None, encoding=DEFAULT_ENCODING):
        UserList.__init__(self, items or [])
        self.path = path
        self.encoding = encoding

    @classmethod
    def open(cls, path, encoding=None, error_handling=ERROR_PASS):
        """
        open(path[, encoding][, error_handling]) -> TraceFile

        Encoding is detected from a byte order mark or the content when not
        given.
        """
        encoding = normalize_encoding(encoding or detect_encoding(path))
        new_file = cls(path=path, encoding=encoding)
        try:
            with codecs.open(path, 'r', encoding=encoding) as source_file:
                new_file.read(source_file, error_handling=error_handling)
        except UnicodeDecodeError as error:
            raise UndecodableFile(path, encoding, error)
        return new_file

    @classmethod
    def from_string(cls, source, **kwargs):
        """
        from_string(source, **kwargs) -> TraceFile
        """
        error_handling = kwargs.pop('error_handling', cls.ERROR_PASS)
        new_file = cls(**kwargs)
        new_file.read(source.splitlines(True), error_handling=error_handling)
        return new_file

    def read(self, source_file, error_handling=ERROR_PASS):
        """
        read(source_file[, error_handling])

        Parse the events of `source_file` and append them to the current
        instance.

        `source_file` -> Any iterable that yield unicode strings, like a file
            opened with `codecs.open()` or an array of unicode.
        """
        self.extend(self.stream(source_file, error_handling=error_handling))
        return self

    @classmethod
    def stream(cls, source_file, error_handling=ERROR_PASS):
        """
        stream(source_file[, error_handling])

        Yield Event instances as soon as they have been parsed, without
        storing them, so that growing traces can be checked event by event.
        Blank lines are ignored.
        """
        for line_number, line in zip(count(1), source_file):
            if line_number == 1:
                line = line.lstrip(u'\ufeff')
            if not line.strip():
                continue
            try:
                yield Event.from_json(line)
            except InvalidEvent as error:
                cls._handle_error(InvalidTraceLine(line_number, str(error)),
                                  error_handling)

    def save(self, path=None, encoding=None):
        """
        save([path][, encoding])

        Use initial path if no other provided.
        Use initial encoding if no other provided.
        """
        path = path or self.path
        encoding = encoding or self.encoding
        with codecs.open(path, 'w', encoding=encoding) as save_file:
            self.write_into(save_file)

    def write_into(self, output_file):
        """
        write_into(output_file)

        `output_file` -> Any instance that respond to `write()`, typically a
        file object
        """
        for event in self:
            output_file.write(event.to_json())
            output_file.write('\n')

    @classmethod
    def _handle_error(cls, error, error_handling):
        if error_handling == cls.ERROR_RAISE:
            raise error
        if error_handling == cls.ERROR_LOG:
            logger.warning('skipping trace %s', error)
