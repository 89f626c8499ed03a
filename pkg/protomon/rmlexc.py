"""
Exception classes
"""


class Error(Exception):
    """
    Protomon's base exception
    """
    pass


class SourceError(Error):
    """
    An error located in some specification text.

    kind -> str: short machine readable category (e.g. 'unbound-variable').
    message -> str: human readable description.
    line, column -> int: 1-based location inside the source text.
    """

    def __init__(self, kind, message, line=1, column=1):
        super(SourceError, self).__init__(kind, message, line, column)
        self.kind = kind
        self.message = message
        self.line = line
        self.column = column

    def __str__(self):
        return '%d:%d: %s: %s' % (self.line, self.column, self.kind,
                                  self.message)

    def __eq__(self, other):
        if not isinstance(other, SourceError):
            return NotImplemented
        return self.args == other.args and type(self) is type(other)

    def __hash__(self):
        return hash((type(self), self.args))

    def to_dict(self):
        return {'kind': self.kind, 'message': self.message,
                'line': self.line, 'column': self.column}


class ParseError(SourceError):
    """
    Raised when the tokenizer or the parser fail on malformed specification
    text
    """
    pass


class ValidationError(SourceError):
    """
    Reported by the validator on a well formed but meaningless specification
    """
    pass


class InvalidSpec(Error):
    """
    Raised when a specification parses but does not validate
    """

    def __init__(self, errors):
        super(InvalidSpec, self).__init__(errors)
        self.errors = list(errors)

    def __str__(self):
        return '\n'.join(str(e) for e in self.errors)


class InvalidEvent(Error):
    """
    Raised when a record can not be read as an event
    """
    pass


class InvalidTraceLine(InvalidEvent):
    """
    Raised when a line of a trace file is not a valid event
    """

    def __init__(self, line, reason):
        super(InvalidTraceLine, self).__init__(line, reason)
        self.line = line
        self.reason = reason

    def __str__(self):
        return 'line %d: %s' % (self.line, self.reason)


class EncodingError(Error):
    """
    Raised when a bus message content can not be flattened into an event
    """
    pass


class TransportError(Error):
    """
    Raised when the monitor service can not be reached or answers garbage
    """
    pass


class UndecodableFile(Error):
    """
    Raised when a specification or trace file is not valid text in the
    encoding it was read with
    """

    def __init__(self, path, encoding, reason):
        super(UndecodableFile, self).__init__(path, encoding, reason)
        self.path = path
        self.encoding = encoding
        self.reason = reason

    def __str__(self):
        return 'can not read %s as %s: %s' % (self.path, self.encoding,
                                              self.reason)
