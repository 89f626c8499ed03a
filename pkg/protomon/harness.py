# -*- coding: utf-8 -*-
"""
Simulated multi-agent system for end to end runs against a monitor service.

Scripted agents exchange messages over a tick ordered bus that delivers one
message per tick. A sniffer forwards every non-warn message to the monitor
service; on the first violation a monitor agent warns the sender and the
receiver of the offending message, before that message reaches its receiver.
"""
import logging
import os
from collections import Counter, deque, namedtuple
from dataclasses import dataclass, field

import httpx

from protomon.rmlexc import (EncodingError, InvalidSpec, SourceError,
                             TransportError)
from protomon.rmlevent import Event, is_atom
from protomon.tracefile import TraceFile

logger = logging.getLogger(__name__)

SPECS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'specs')
MONITOR_AGENT = 'monitor'
MAX_TICKS = 1000


@dataclass(frozen=True)
class Functor(object):
    """
    Functor(name, args)

    Message content in the agents' own language: a name applied to atoms or
    other functors, e.g. answer(result(p12, bed3)).
    """
    name: str
    args: tuple = ()

    @property
    def depth(self):
        nested = [arg.depth for arg in self.args if isinstance(arg, Functor)]
        return 1 + max(nested or [0])

    def __str__(self):
        if not self.args:
            return self.name
        return '%s(%s)' % (self.name, ', '.join(str(arg)
                                                for arg in self.args))


def functor(name, *args):
    return Functor(name, tuple(args))


@dataclass(frozen=True)
class BusMessage(object):
    performative: str
    sender: str
    receiver: str
    content: Functor = None

    PERFORMATIVES = ('question', 'assert', 'warn')

    def __post_init__(self):
        if self.performative not in self.PERFORMATIVES:
            raise ValueError('unknown performative %r' % self.performative)
        if self.sender == self.receiver:
            raise ValueError('%s can not message itself' % self.sender)

    @property
    def topic(self):
        return self.content.name if self.content is not None else None

    def __str__(self):
        return '%s, %s→%s, %s' % (self.performative, self.sender,
                                  self.receiver,
                                  self.content if self.content else '-')


def question(sender, receiver, content=None):
    return BusMessage('question', sender, receiver, content)


def assertion(sender, receiver, content=None):
    return BusMessage('assert', sender, receiver, content)


# answer(result(X, Y)) is the deepest content the scenarios send
MAX_CONTENT_DEPTH = 2


def _encode_functor(content):
    names = [content.name]
    args = content.args
    while len(args) == 1 and isinstance(args[0], Functor):
        names.append(args[0].name)
        args = args[0].args
    record = {'name': names[0] if len(names) == 1 else names}
    for index, arg in enumerate(args, 1):
        if isinstance(arg, Functor):
            record['arg%d' % index] = _encode_functor(arg)
        elif is_atom(arg):
            record['arg%d' % index] = arg
        else:
            raise EncodingError('unsupported argument %r in %s'
                                % (arg, content))
    return record


def encode_event(message):
    """
    encode_event(message) -> Event

    A chain of single argument functors flattens into a `name` list, the
    arguments of the innermost one become arg1..argN.
    raise EncodingError
    """
    entries = {
        'performative': message.performative,
        'sender': message.sender,
        'receiver': message.receiver,
    }
    if message.content is not None:
        if message.content.depth > MAX_CONTENT_DEPTH:
            raise EncodingError('%s is nested deeper than %d levels'
                                % (message.content, MAX_CONTENT_DEPTH))
        entries['content'] = _encode_functor(message.content)
    return Event(entries)


@dataclass
class Rule(object):
    """
    React to a (performative, topic) message by emitting `emits`, at most
    `limit` times when a limit is given.
    """
    performative: str
    topic: str
    emits: tuple
    limit: int = None

    def matches(self, message):
        return (message.performative == self.performative
                and message.topic == self.topic)


class ScriptedAgent(object):
    """
    ScriptedAgent(name, rules, steps)

    rules -> list of Rule, tried in order on every delivered message.
    steps -> list of (tick, BusMessage) sent on the agent's own initiative.
    """

    def __init__(self, name, rules=(), steps=()):
        self.name = name
        self.rules = list(rules)
        self.steps = list(steps)
        self.fired = Counter()
        self.warnings = []
        self.suppressed_topics = set()

    def proactive(self, tick):
        return self.outgoing(message for at, message in self.steps
                             if at == tick)

    def receive(self, message):
        if message.performative == 'warn':
            topic = message.content.args[0] if message.content.args else None
            self.warnings.append(message)
            self.suppressed_topics.add(topic)
            logger.info('%s warned by %s about %s', self.name,
                        message.sender, topic)
            return []
        if message.topic in self.suppressed_topics:
            logger.info('%s ignores %s on suppressed topic', self.name,
                        message)
            return []
        emitted = []
        for index, rule in enumerate(self.rules):
            if not rule.matches(message):
                continue
            if rule.limit is not None and self.fired[index] >= rule.limit:
                continue
            self.fired[index] += 1
            emitted.extend(rule.emits)
        return self.outgoing(emitted)

    def outgoing(self, messages):
        kept = []
        for message in messages:
            if message.topic in self.suppressed_topics:
                logger.info('%s suppresses %s', self.name, message)
            else:
                kept.append(message)
        return kept

    @property
    def last_step(self):
        return max([at for at, _ in self.steps] or [-1])


class MonitorClient(object):
    """
    MonitorClient(endpoint[, transport][, timeout])

    Thin client of the monitor service REST interface. `transport` is handed
    to httpx, tests pass an httpx.WSGITransport wrapping the Flask app.
    raise TransportError
    """

    def __init__(self, endpoint, transport=None, timeout=10.0):
        self.endpoint = endpoint.rstrip('/')
        self.http = httpx.Client(base_url=self.endpoint, transport=transport,
                                 timeout=timeout)

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()

    def close(self):
        self.http.close()

    def _request(self, method, path, expected, **kwargs):
        try:
            response = self.http.request(method, path, **kwargs)
        except httpx.HTTPError as error:
            raise TransportError('%s %s%s failed: %s'
                                 % (method, self.endpoint, path, error))
        if response.status_code == 422:
            raise InvalidSpec([SourceError(**item)
                               for item in response.json().get('errors', [])])
        if response.status_code != expected:
            raise TransportError('%s %s%s answered %d: %s'
                                 % (method, self.endpoint, path,
                                    response.status_code, response.text))
        try:
            return response.json()
        except ValueError:
            raise TransportError('%s %s%s answered non JSON content'
                                 % (method, self.endpoint, path))

    def create(self, spec_text):
        body = self._request('POST', '/monitors', 201,
                             content=spec_text.encode('utf-8'),
                             headers={'Content-Type': 'text/plain'})
        return body['id']

    def submit(self, monitor_id, event):
        return self._request('POST', '/monitors/%s/events' % monitor_id, 200,
                             content=event.to_json().encode('utf-8'),
                             headers={'Content-Type': 'application/json'})

    def summary(self, monitor_id):
        return self._request('GET', '/monitors/%s' % monitor_id, 200)

    def events(self, monitor_id):
        return self._request('GET', '/monitors/%s/events' % monitor_id, 200)

    def delete(self, monitor_id):
        return self._request('DELETE', '/monitors/%s' % monitor_id, 200)


TranscriptEntry = namedtuple('TranscriptEntry', 'tick message status')
ScenarioWarning = namedtuple('ScenarioWarning', 'event_index agents')


@dataclass
class ScenarioOutcome(object):
    name: str
    monitor_id: str = None
    transcript: list = field(default_factory=list)
    events: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def final_verdict(self):
        return self.verdicts[-1] if self.verdicts else None

    def format_transcript(self):
        return ['%d, %s, %s' % (entry.tick, entry.message, entry.status)
                for entry in self.transcript]


class Bus(object):
    """
    Bus(agents, client, monitor_id, outcome)

    Delivers one queued message per tick; the sniffer and the monitor agent
    sit on the delivery path.
    """

    def __init__(self, agents, client, monitor_id, outcome):
        self.agents = dict((agent.name, agent) for agent in agents)
        self.client = client
        self.monitor_id = monitor_id
        self.outcome = outcome
        self.queue = deque()
        self.warned = False

    def run(self):
        last_step = max(agent.last_step for agent in self.agents.values())
        tick = 0
        while tick <= last_step or self.queue:
            if tick >= MAX_TICKS:
                raise RuntimeError('scenario %s still running after %d ticks'
                                   % (self.outcome.name, MAX_TICKS))
            for agent in self.agents.values():
                self.post(agent.proactive(tick), forwarded=False)
            if self.queue:
                message, forwarded = self.queue.popleft()
                self.transmit(tick, message, forwarded)
            tick += 1
        return self.outcome

    def post(self, messages, forwarded):
        self.queue.extend((message, forwarded) for message in messages)

    def transmit(self, tick, message, forwarded):
        if message.performative == 'warn':
            self.outcome.transcript.append(TranscriptEntry(tick, message,
                                                           'warn'))
            self.deliver(message)
            # the held back message follows its warnings
            while self.queue and self.queue[0][1]:
                self.deliver(self.queue.popleft()[0])
            return
        if forwarded:
            self.deliver(message)
            return
        status = self.sniff(tick, message)
        if status == 'violation' and not self.warned:
            self.warned = True
            self.warn(message)
        else:
            self.deliver(message)

    def sniff(self, tick, message):
        event = encode_event(message)
        response = self.client.submit(self.monitor_id, event)
        self.outcome.events.append(event)
        self.outcome.verdicts.append(response['verdict'])
        status = response['verdict'] if response.get('relevant', True) \
            else 'skipped'
        self.outcome.transcript.append(TranscriptEntry(tick, message, status))
        return response['verdict']

    def warn(self, message):
        index = len(self.outcome.events)
        agents = (message.sender, message.receiver)
        self.outcome.warnings.append(ScenarioWarning(index, agents))
        logger.warning('violation at event %d: %s', index, message)
        content = functor('violation', message.topic) if message.topic \
            else functor('violation')
        self.queue.appendleft((message, True))
        for agent in reversed(agents):
            warning = BusMessage('warn', MONITOR_AGENT, agent, content)
            self.queue.appendleft((warning, False))

    def deliver(self, message):
        agent = self.agents.get(message.receiver)
        if agent is None:
            logger.debug('nobody listens to %s', message.receiver)
            return
        self.post(agent.receive(message), forwarded=False)


Scenario = namedtuple('Scenario', 'name spec_file description build')


def _bed_allocation_agents(operator_rules, validation='valid'):
    assistant_rules = [
        Rule('question', 'getValidationResult',
             (question('assistant', 'validator', functor('validate')),)),
        Rule('assert', 'allocation',
             (assertion('assistant', 'operator',
                        functor('answer', functor('result', 'p12',
                                                  'bed3'))),)),
        Rule('question', 'allocValPatients',
             (question('assistant', 'database',
                       functor('allocate', 'p12', 'bed3')),)),
        Rule('assert', 'allocated',
             (assertion('assistant', 'operator',
                        functor('confirmation', 'allocated')),)),
    ]
    if validation == 'valid':
        assistant_rules.insert(1, Rule(
            'assert', 'validation',
            (question('assistant', 'optimiser', functor('optimise', 'p12')),)))
    else:
        assistant_rules.insert(1, Rule(
            'assert', 'validation',
            (assertion('assistant', 'operator',
                       functor('answer', functor('result'))),)))
    return [
        ScriptedAgent('operator', operator_rules, steps=[
            (0, question('operator', 'assistant',
                         functor('getValidationResult')))]),
        ScriptedAgent('assistant', assistant_rules),
        ScriptedAgent('validator', [
            Rule('question', 'validate',
                 (assertion('validator', 'assistant',
                            functor('validation', validation)),))]),
        ScriptedAgent('optimiser', [
            Rule('question', 'optimise',
                 (assertion('optimiser', 'assistant',
                            functor('allocation', 'p12', 'bed3')),))]),
        ScriptedAgent('database', [
            Rule('question', 'allocate',
                 (assertion('database', 'assistant',
                            functor('allocated', 'p12', 'bed3')),))]),
    ]


def _happy_agents():
    return _bed_allocation_agents([
        Rule('assert', 'answer',
             (question('operator', 'assistant',
                       functor('allocValPatients')),))])


def _topic_change_agents():
    return _bed_allocation_agents([
        Rule('assert', 'answer',
             (question('operator', 'assistant', functor('getFreeBeds')),))])


def _empty_result_agents():
    return _bed_allocation_agents([
        Rule('assert', 'answer',
             (question('operator', 'assistant',
                       functor('getValidationResult')),), limit=1)],
        validation='invalid')


def _unanswered_agents():
    return [
        ScriptedAgent('operator', steps=[
            (0, question('operator', 'assistant',
                         functor('getValidationResult')))]),
        ScriptedAgent('assistant', [
            Rule('question', 'getValidationResult',
                 (question('assistant', 'database',
                           functor('getFreeBeds')),))]),
        ScriptedAgent('database', [
            Rule('question', 'getFreeBeds',
                 (assertion('database', 'assistant',
                            functor('freeBeds', 3)),))]),
    ]


SCENARIOS = dict((scenario.name, scenario) for scenario in [
    Scenario('bed_allocation_happy', 'topic_change.rml',
             'validation result accepted, beds allocated', _happy_agents),
    Scenario('topic_change_violation', 'topic_change.rml',
             'operator changes topic after the result', _topic_change_agents),
    Scenario('unanswered_question', 'question_answer.rml',
             'assistant asks the database before answering',
             _unanswered_agents),
    Scenario('empty_result_branch', 'topic_change.rml',
             'empty result, operator starts over', _empty_result_agents),
])


def shipped_spec_path(file_name):
    return os.path.join(SPECS_DIR, file_name)


def run_scenario(name, endpoint, spec_text=None, transport=None):
    """
    run_scenario(name, endpoint[, spec_text][, transport]) -> ScenarioOutcome

    Create a monitor session from `spec_text` (default: the scenario's
    shipped specification), run the scenario against it and return what
    happened on the bus.
    raise ValueError on unknown scenario, TransportError, InvalidSpec
    """
    if name not in SCENARIOS:
        raise ValueError('unknown scenario %r, expected one of %s'
                         % (name, ', '.join(sorted(SCENARIOS))))
    scenario = SCENARIOS[name]
    if spec_text is None:
        with open(shipped_spec_path(scenario.spec_file),
                  encoding='utf-8') as spec_file:
            spec_text = spec_file.read()
    with MonitorClient(endpoint, transport=transport) as client:
        monitor_id = client.create(spec_text)
        outcome = ScenarioOutcome(name, monitor_id)
        logger.info('running %s against monitor %s', name, monitor_id)
        return Bus(scenario.build(), client, monitor_id, outcome).run()


def record_trace(outcome, path):
    """
    record_trace(outcome, path) -> TraceFile

    Save the forwarded events as JSON-lines.
    """
    trace = TraceFile(list(outcome.events), path=path)
    trace.save()
    return trace
