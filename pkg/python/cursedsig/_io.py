"""JSON and CSV reports with fixed float formatting."""

import csv
import json

import numpy as np

from ._common import OPT_TOL, _fmt
from ._game import Assessment, BeliefSystem, ReceiverStrategy, SenderStrategy


def _rounded(value):
    if isinstance(value, dict):
        return {str(k): _rounded(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_rounded(v) for v in value]
    if isinstance(value, np.ndarray):
        return _rounded(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        return float(_fmt(value))
    if isinstance(value, np.integer):
        return int(value)
    return value


def dumps(document):
    """Deterministic JSON: floats rounded to 12 significant digits, keys in insertion order."""
    return json.dumps(_rounded(document), indent=2, allow_nan=False) + '\n'


def assessment_to_dict(assessment):
    return {
        'chi': assessment.chi,
        'sender': assessment.sender.as_dict(),
        'receiver': assessment.receiver.as_dict(),
        'beliefs': assessment.beliefs.as_dict(),
    }


def _criterion_to_dict(report):
    return {
        'passed': report.passed,
        'checks': [{
            'message': check.message,
            'dominated_types': list(check.dominated_types),
            'pinned': check.pinned,
            'region': check.region,
            'survives': check.survives,
            'note': check.note,
        } for check in report.checks],
    }


def record_to_dict(record):
    doc = {
        'kind': record.kind,
        'source': record.source,
        **assessment_to_dict(record.assessment),
        'payoffs': dict(zip(record.sender.types, record.sender_payoffs)),
        'onpath_messages': list(record.onpath_messages),
        'offpath_beliefs': {m: dict(zip(record.sender.types, b)) for m, b in record.offpath_beliefs.items()},
        'diagnostics': {'verified': True},
    }
    if record.refinement_verdicts:
        doc['refinement_verdicts'] = dict(record.refinement_verdicts)
        doc['criterion_reports'] = {name: _criterion_to_dict(r) for name, r in record.criterion_reports.items()}
    return doc


def _table(section, rows, columns, name, default=0.0):
    if not isinstance(section, dict):
        raise ValueError(f'{name} should be an object')
    unknown = set(section) - set(rows)
    if unknown:
        raise ValueError(f'{name} has unknown keys {sorted(unknown)}')
    table = np.full((len(rows), len(columns)), default)
    for i, row in enumerate(rows):
        entries = section.get(row, {})
        if not isinstance(entries, dict) or set(entries) - set(columns):
            raise ValueError(f'{name}[{row!r}] has unknown entries')
        for j, column in enumerate(columns):
            table[i, j] = entries.get(column, default)
    return table


def _renormalized(table):
    # Reported rows are rounded to REPORT_DIGITS.
    sums = table.sum(axis=1, keepdims=True)
    close = np.abs(sums - 1) <= OPT_TOL
    return np.where(close, table / np.where(close, sums, 1), table)


def assessment_from_dict(game, doc, chi=None):
    """Inverse of ``assessment_to_dict``; missing probabilities are zero."""
    if not isinstance(doc, dict):
        raise ValueError('an assessment should be a JSON object')
    chi = doc.get('chi') if chi is None else chi
    if chi is None:
        raise ValueError('the assessment has no chi')
    sender = SenderStrategy(game.types, game.messages,
                            _renormalized(_table(doc.get('sender'), game.types, game.messages, 'sender')))
    raw = doc.get('receiver')
    if game.is_wage:
        if not isinstance(raw, dict) or set(raw) != set(game.messages):
            raise ValueError('receiver should give a wage for every message')
        receiver = ReceiverStrategy(game.messages, wages=[raw[m] for m in game.messages])
    else:
        receiver = ReceiverStrategy(game.messages, game.actions,
                                    matrix=_renormalized(_table(raw, game.messages, game.actions, 'receiver')))
    beliefs = BeliefSystem(game.messages, game.types,
                           _renormalized(_table(doc.get('beliefs'), game.messages, game.types, 'beliefs')))
    return Assessment(sender, receiver, beliefs, chi)


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (float, np.floating)):
        return _fmt(value)
    return str(value)


def write_csv(handle, rows, columns, comment):
    """Write ``rows`` (dicts) under a leading '# comment' line."""
    handle.write(f'# {comment}\n')
    writer = csv.writer(handle, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(column)) for column in columns])
