"""Built-in games: the binary-investment job-market game and the modified beer-quiche game."""

from pathlib import Path

import numpy as np

from ._game import FiniteActions, PriorDistribution, SignalingGame, SupportSpec, WageQuadratic

DATA_DIR = Path(__file__).resolve().parent / 'data'

KMN_HYBRID = SupportSpec({'H': ('0', '1'), 'L': ('0',)}, name='hybrid')
BEER_QUICHE_SEMI_SEPARATING = SupportSpec({'weak': ('Beer', 'Quiche'), 'strong': ('Beer',)},
                                          {'Beer': ('Fight', 'NotFight')}, name='semi-separating')


def data_path(name):
    """Path of a file shipped in the package's data directory."""
    return DATA_DIR / name


def kmn_game():
    """Productivities 50 and 10 with equal prior; investing costs 9 for H and 45 for L."""
    return SignalingGame(
        PriorDistribution(('H', 'L'), [0.5, 0.5]),
        ('0', '1'),
        WageQuadratic(np.array([50.0, 10.0])),
        sender_cost=np.array([[0.0, 9.0], [0.0, 45.0]]),
        supports=(KMN_HYBRID,),
        name='kmn')


def beer_quiche_game():
    # Axes: (type, message, action) with types (weak, strong), messages
    # (Beer, Quiche) and actions (Fight, NotFight).
    sender = np.array([[[0, 2], [1, 3]],
                       [[1, 3], [0, 2]]], dtype=np.float64)
    receiver = np.array([[[4, 0], [1, 0]],
                         [[0, 1], [0, 1]]], dtype=np.float64)
    return SignalingGame(
        PriorDistribution(('weak', 'strong'), [0.4, 0.6]),
        ('Beer', 'Quiche'),
        FiniteActions(('Fight', 'NotFight')),
        sender_payoff=sender,
        receiver_payoff=receiver,
        supports=(BEER_QUICHE_SEMI_SEPARATING,),
        name='beer-quiche')
