from protomon.rmlevent import (Binding, Event, PatternBody, PatternDecl,
                               match_body, match_decl, is_relevant)
from protomon.rmlterm import format_term
from protomon.rmlparser import parse_spec, validate_spec
from protomon.rmlspec import Spec, format_spec
from protomon.monitor import (Configuration, Monitor, MonitorState, Verdict,
                              new_monitor, nullable, derive, step)
from protomon.oracle import enumerate_traces
from protomon.tracefile import TraceFile
from protomon.rmlexc import (Error, ParseError, ValidationError, InvalidSpec,
                             InvalidEvent, InvalidTraceLine, UndecodableFile)
from protomon.version import VERSION, VERSION_STRING

__all__ = [
    'Binding', 'Event', 'PatternBody', 'PatternDecl', 'match_body',
    'match_decl', 'is_relevant', 'format_term', 'format_spec', 'parse_spec',
    'validate_spec', 'Spec', 'Configuration', 'Monitor', 'MonitorState',
    'Verdict', 'new_monitor', 'nullable', 'derive', 'step',
    'enumerate_traces', 'TraceFile', 'Error', 'ParseError',
    'ValidationError', 'InvalidSpec', 'InvalidEvent', 'InvalidTraceLine',
    'UndecodableFile',
]

ERROR_PASS = TraceFile.ERROR_PASS
ERROR_LOG = TraceFile.ERROR_LOG
ERROR_RAISE = TraceFile.ERROR_RAISE

open = Spec.open
from_string = Spec.from_string
stream = TraceFile.stream
