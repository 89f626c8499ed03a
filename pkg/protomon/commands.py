#!/usr/bin/env python
# -*- coding: utf-8 -*-
import argparse
import logging
import sys
from textwrap import dedent

from protomon.harness import SCENARIOS, record_trace, run_scenario
from protomon.monitor import Monitor
from protomon.rmlexc import Error, InvalidSpec
from protomon.rmlspec import Spec
from protomon.service import DEFAULT_HOST, DEFAULT_PORT, parse_listen, serve
from protomon.textio import read_text
from protomon.tracefile import TraceFile
from protomon.version import VERSION_STRING

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2


def underline(string):
    return "\033[4m%s\033[0m" % string


class ProtocolMonitorCommand(object):

    DESCRIPTION = dedent("""\
        Runtime verification of agent interaction protocols

        Check recorded traces, run simulated agents against a monitor
        service, or serve monitors over HTTP.
    """)
    CHECK_EPILOG = dedent("""\

        Examples:
            Replay a recorded trace:
                $ protomon check --spec question_answer.rml --trace run.jsonl

            Only the summary, with the accepted event types on violation:
                $ protomon check --quiet --explain --spec topic_change.rml --trace run.jsonl

        Exit status is 0 without violation, 1 on violation, 2 on errors.
    """)
    SIM_EPILOG = dedent("""\

        Examples:
            $ protomon serve &
            $ protomon sim --scenario topic_change_violation --endpoint http://127.0.0.1:8087 --record run.jsonl
    """)
    LISTEN_HELP = "Address to listen on, in the form HOST:PORT (default %s:%d)" % (
        DEFAULT_HOST, DEFAULT_PORT)
    SPEC_HELP = "Protocol specification (.rml)"
    TRACE_HELP = "Recorded trace, one JSON event per line (.jsonl)"

    def __init__(self, output=None, error_output=None, transport=None):
        self._output = output
        self._error_output = error_output
        # httpx transport for sim, None means real network
        self.transport = transport

    def build_parser(self):
        parser = argparse.ArgumentParser(prog='protomon', description=self.DESCRIPTION,
            formatter_class=argparse.RawTextHelpFormatter)
        parser.add_argument('--verbose', action='store_true', help="Log debugging information")
        parser.add_argument('-v', '--version', action='version', version='%%(prog)s %s' % VERSION_STRING)
        subparsers = parser.add_subparsers(title='commands', dest='command')
        subparsers.required = True

        check_parser = subparsers.add_parser('check', help="Check a recorded trace against a specification",
            epilog=self.CHECK_EPILOG, formatter_class=argparse.RawTextHelpFormatter)
        check_parser.add_argument('--spec', required=True, metavar=underline('file'), help=self.SPEC_HELP)
        check_parser.add_argument('--trace', required=True, metavar=underline('file'), help=self.TRACE_HELP)
        check_parser.add_argument('--quiet', action='store_true', help="Only print the summary")
        check_parser.add_argument('--explain', action='store_true',
            help="On violation, list the event types that would have been accepted")
        check_parser.set_defaults(action=self.check)

        sim_parser = subparsers.add_parser('sim', help="Run a simulated scenario against a monitor service",
            epilog=self.SIM_EPILOG, formatter_class=argparse.RawTextHelpFormatter)
        sim_parser.add_argument('--scenario', required=True, choices=sorted(SCENARIOS))
        sim_parser.add_argument('--spec', metavar=underline('file'),
            help=self.SPEC_HELP + ", defaults to the one shipped with the scenario")
        sim_parser.add_argument('--endpoint', required=True, metavar=underline('url'),
            help="Base URL of the monitor service")
        sim_parser.add_argument('--record', metavar=underline('file'), help="Save the forwarded events")
        sim_parser.set_defaults(action=self.sim)

        serve_parser = subparsers.add_parser('serve', help="Serve monitors over HTTP")
        serve_parser.add_argument('--listen', type=self.parse_listen,
            default=(DEFAULT_HOST, DEFAULT_PORT), help=self.LISTEN_HELP)
        serve_parser.set_defaults(action=self.serve)

        return parser

    def run(self, args):
        self.arguments = self.build_parser().parse_args(args)
        self.configure_logging()
        return self.arguments.action()

    def configure_logging(self):
        level = logging.DEBUG if self.arguments.verbose else logging.WARNING
        logging.basicConfig(level=level, stream=self.error_output,
                            format='%(levelname)s %(name)s: %(message)s')

    def parse_listen(self, value):
        try:
            return parse_listen(value)
        except ValueError as error:
            raise argparse.ArgumentTypeError(str(error))

    def write(self, line):
        self.output.write(line + '\n')

    def fail(self, message):
        self.error_output.write('protomon: %s\n' % message)
        return EXIT_ERROR

    def check(self):
        try:
            spec = Spec.open(self.arguments.spec)
        except InvalidSpec as error:
            return self.fail('%s:\n%s' % (self.arguments.spec, error))
        except (Error, IOError) as error:
            return self.fail('%s: %s' % (self.arguments.spec, error))
        try:
            trace = TraceFile.open(self.arguments.trace, error_handling=TraceFile.ERROR_RAISE)
        except (Error, IOError) as error:
            return self.fail('%s: %s' % (self.arguments.trace, error))

        monitor = Monitor(spec)
        for event in trace:
            outcome = monitor.feed(event)
            if not self.arguments.quiet:
                self.write('#%d\t%s\t%s' % (outcome.index, 'relevant' if outcome.relevant else 'skipped',
                                            outcome.verdict))
        if monitor.violated:
            self.write('VIOLATION at #%d: %s' % (monitor.violation_index, monitor.violating_event.to_json()))
            if self.arguments.explain:
                self.write('EXPECTED %s' % (', '.join(monitor.expected_at_violation) or '<nothing>'))
        self.write('RESULT %s after %d events' % (monitor.verdict, monitor.events_consumed))
        return EXIT_VIOLATION if monitor.violated else EXIT_OK

    def sim(self):
        spec_text = None
        try:
            if self.arguments.spec:
                spec_text, _ = read_text(self.arguments.spec)
            outcome = run_scenario(self.arguments.scenario, self.arguments.endpoint, spec_text,
                                   transport=self.transport)
        except (Error, IOError) as error:
            return self.fail(str(error))

        for line in outcome.format_transcript():
            self.write(line)
        if self.arguments.record:
            record_trace(outcome, self.arguments.record)
        self.write('RESULT %s after %d events, %d warnings' % (outcome.final_verdict or '-',
                                                               len(outcome.events), len(outcome.warnings)))
        return EXIT_VIOLATION if outcome.warnings else EXIT_OK

    def serve(self):
        requests_log = logging.getLogger('protomon.service.requests')
        handler = logging.StreamHandler(self.output)
        handler.setFormatter(logging.Formatter('%(message)s'))
        requests_log.addHandler(handler)
        requests_log.setLevel(logging.INFO)
        requests_log.propagate = False
        host, port = self.arguments.listen
        serve(host, port)
        return EXIT_OK

    @property
    def output(self):
        return self._output or sys.stdout

    @property
    def error_output(self):
        return self._error_output or sys.stderr


def main():
    sys.exit(ProtocolMonitorCommand().run(sys.argv[1:]))

if __name__ == '__main__':
    main()
