# -*- coding: utf-8 -*-
"""
REST verdict service.

    POST   /monitors               create a session from specification text
    POST   /monitors/<id>/events   submit one event, get its verdict
    GET    /monitors/<id>          session summary
    GET    /monitors/<id>/events   event log
    DELETE /monitors/<id>          drop a session

Sessions live in memory only.
"""
import itertools
import json
import logging
import threading
import time

from flask import Flask, g, jsonify, request

from protomon.monitor import Monitor, Verdict
from protomon.rmlexc import InvalidEvent, InvalidSpec, ParseError
from protomon.rmlevent import Event
from protomon.rmlspec import Spec

logger = logging.getLogger(__name__)
request_logger = logging.getLogger('protomon.service.requests')

DEFAULT_HOST = '127.0.0.1'
DEFAULT_PORT = 8087


class MonitorSession(object):
    """
    MonitorSession(session_id, spec)

    One monitor and the log of the events it was fed, each with the verdict
    that was returned for it. Submissions are serialized by `lock`.
    """

    def __init__(self, session_id, spec):
        self.id = session_id
        self.spec = spec
        self.monitor = Monitor(spec)
        self.created_at = time.time()
        self.event_log = []
        self.lock = threading.Lock()

    @property
    def state(self):
        return self.monitor.state

    def submit(self, event):
        with self.lock:
            outcome = self.monitor.feed(event)
            self.event_log.append((event, outcome))
            return self.verdict_response(outcome)

    def verdict_response(self, outcome):
        response = {
            'verdict': str(outcome.verdict),
            'event_index': outcome.index,
            'violation': outcome.verdict is Verdict.VIOLATION,
            'relevant': outcome.relevant,
        }
        if response['violation']:
            response['event'] = self.monitor.violating_event.to_dict()
            response['violation_index'] = self.monitor.violation_index
            response['expected'] = list(self.monitor.expected_at_violation)
        return response

    def summary(self):
        with self.lock:
            return {
                'id': self.id,
                'event_index': self.monitor.events_consumed,
                'violation': self.monitor.violated,
                'verdict': str(self.monitor.verdict),
                'created_at': self.created_at,
            }

    def log_entries(self):
        with self.lock:
            entries = list(self.event_log)
        return [{'event_index': outcome.index,
                 'event': event.to_dict(),
                 'verdict': str(outcome.verdict),
                 'relevant': outcome.relevant}
                for event, outcome in entries]


class SessionRegistry(object):
    """
    Thread safe map of session ids to MonitorSession instances. Ids are
    never reused.
    """
    ID_FORMAT = 'm-%d'

    def __init__(self):
        self._sessions = {}
        self._lock = threading.Lock()
        self._counter = itertools.count(1)

    def create(self, spec):
        with self._lock:
            session = MonitorSession(self.ID_FORMAT % next(self._counter),
                                     spec)
            self._sessions[session.id] = session
        logger.info('created monitor %s', session.id)
        return session

    def get(self, session_id):
        with self._lock:
            return self._sessions.get(session_id)

    def delete(self, session_id):
        with self._lock:
            session = self._sessions.pop(session_id, None)
        if session is not None:
            logger.info('deleted monitor %s', session_id)
        return session is not None

    def __len__(self):
        with self._lock:
            return len(self._sessions)


def error_response(status, message, **extra):
    body = {'error': message}
    body.update(extra)
    return jsonify(body), status


def _read_spec_text():
    raw = request.get_data(cache=False)
    try:
        text = raw.decode('utf-8')
    except UnicodeDecodeError:
        return None
    if request.is_json:
        try:
            payload = json.loads(text)
        except ValueError:
            return None
        if not isinstance(payload, dict) or \
                not isinstance(payload.get('spec'), str):
            return None
        text = payload['spec']
    return text if text.strip() else None


def create_app(registry=None):
    """
    create_app([registry]) -> Flask

    `registry` defaults to a fresh, empty SessionRegistry.
    """
    app = Flask(__name__)
    app.json.sort_keys = False
    registry = registry if registry is not None else SessionRegistry()
    app.extensions['protomon.registry'] = registry

    @app.before_request
    def start_timer():
        g.started = time.perf_counter()
        g.monitor_id = '-'

    @app.after_request
    def log_request(response):
        elapsed = (time.perf_counter() - g.get('started', time.perf_counter()))
        request_logger.info(
            'method=%s path=%s status=%d duration_ms=%.1f monitor=%s',
            request.method, request.path, response.status_code,
            elapsed * 1000, g.get('monitor_id', '-'))
        return response

    @app.route('/monitors', methods=['POST'])
    def create_monitor():
        text = _read_spec_text()
        if text is None:
            return error_response(400, 'expected a specification in the '
                                       'request body')
        try:
            spec = Spec.from_string(text)
        except ParseError as error:
            return error_response(422, 'specification does not parse',
                                  errors=[error.to_dict()])
        except InvalidSpec as error:
            return error_response(422, 'specification is not valid',
                                  errors=[e.to_dict() for e in error.errors])
        session = registry.create(spec)
        g.monitor_id = session.id
        return jsonify({'id': session.id}), 201

    @app.route('/monitors/<session_id>/events', methods=['POST'])
    def submit_event(session_id):
        g.monitor_id = session_id
        session = registry.get(session_id)
        if session is None:
            return error_response(404, 'no monitor %s' % session_id)
        try:
            event = Event.from_json(request.get_data(as_text=True))
        except InvalidEvent as error:
            return error_response(400, str(error))
        return jsonify(session.submit(event)), 200

    @app.route('/monitors/<session_id>/events', methods=['GET'])
    def list_events(session_id):
        g.monitor_id = session_id
        session = registry.get(session_id)
        if session is None:
            return error_response(404, 'no monitor %s' % session_id)
        return jsonify(session.log_entries()), 200

    @app.route('/monitors/<session_id>', methods=['GET'])
    def get_monitor(session_id):
        g.monitor_id = session_id
        session = registry.get(session_id)
        if session is None:
            return error_response(404, 'no monitor %s' % session_id)
        return jsonify(session.summary()), 200

    @app.route('/monitors/<session_id>', methods=['DELETE'])
    def delete_monitor(session_id):
        g.monitor_id = session_id
        if not registry.delete(session_id):
            return error_response(404, 'no monitor %s' % session_id)
        return jsonify({'id': session_id, 'deleted': True}), 200

    return app


def parse_listen(value):
    """
    parse_listen('host:port') -> (host, port)
    """
    host, sep, port = value.rpartition(':')
    if not sep or not port.isdigit():
        raise ValueError('expected HOST:PORT, got %r' % value)
    return host or DEFAULT_HOST, int(port)


def serve(host=DEFAULT_HOST, port=DEFAULT_PORT, registry=None):
    app = create_app(registry)
    logger.info('listening on %s:%d', host, port)
    app.run(host=host, port=port, threaded=True)
