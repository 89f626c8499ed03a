# -*- coding: utf-8 -*-
"""
Encoding detection for specification and trace files
"""
import codecs

from chardet import detect

from protomon.rmlexc import UndecodableFile

BOMS = ((codecs.BOM_UTF32_LE, 'utf_32_le'),
        (codecs.BOM_UTF32_BE, 'utf_32_be'),
        (codecs.BOM_UTF16_LE, 'utf_16_le'),
        (codecs.BOM_UTF16_BE, 'utf_16_be'),
        (codecs.BOM_UTF8, 'utf_8'))

DEFAULT_ENCODING = 'utf_8'

# below this chardet guesses are ignored
MIN_CONFIDENCE = 0.9


def normalize_encoding(encoding):
    return encoding.lower().replace('-', '_')


def detect_encoding(path):
    """
    detect_encoding(path) -> str

    Trust a byte order mark when there is one, then a confident chardet
    guess, else fall back to utf-8.
    """
    with open(path, 'rb') as file_descriptor:
        content = file_descriptor.read()

    for bom, encoding in BOMS:
        if content.startswith(bom):
            return encoding

    try:
        content.decode(DEFAULT_ENCODING)
        return DEFAULT_ENCODING
    except UnicodeDecodeError:
        pass

    guess = detect(content)
    if guess.get('encoding') and guess.get('confidence', 0) >= MIN_CONFIDENCE:
        return normalize_encoding(guess['encoding'])
    return DEFAULT_ENCODING


def read_text(path, encoding=None):
    """
    read_text(path[, encoding]) -> (unicode text, encoding)

    The byte order mark, if any, is stripped from the returned text.
    """
    encoding = normalize_encoding(encoding or detect_encoding(path))
    try:
        with codecs.open(path, 'r', encoding=encoding) as source_file:
            text = source_file.read()
    except UnicodeDecodeError as error:
        raise UndecodableFile(path, encoding, error)
    if text.startswith(u'\ufeff'):
        text = text[1:]
    return text, encoding
