import numpy as np

from mvscn import oracle
from mvscn.codec import ERASED, PartialMessage
from mvscn.core import NetworkConfig, new_network
from mvscn.decoding import Arch, step
from mvscn.learning import store


def test_empty_net_arch3_kills_everything():
    net = new_network(NetworkConfig(3, 4))
    act = np.ones((3, 4), dtype=int).tolist()
    assert oracle.naive_decode_step(net, act, "III") == [[0] * 4] * 3


def test_binary_net_arch1_equals_arch2():
    rng = np.random.default_rng(2)
    net = new_network(NetworkConfig(3, 4, 1))
    for _ in range(4):
        store(net, rng.integers(0, 4, 3))
    for _ in range(50):
        act = (rng.random((3, 4)) < 0.5).tolist()
        assert oracle.naive_decode_step(net, act, "I") == oracle.naive_decode_step(net, act, "II")


def test_naive_step_agrees_with_decoder():
    rng = np.random.default_rng(8)
    for _ in range(300):
        net = new_network(NetworkConfig(3, 4, int(rng.integers(1, 4))))
        for _ in range(int(rng.integers(0, 6))):
            store(net, rng.integers(0, 4, 3))
        act = rng.random((3, 4)) < 0.5
        for arch in Arch:
            assert step(net, act, arch).astype(int).tolist() == oracle.naive_decode_step(net, act.tolist(), arch)


def test_candidate_set():
    stored = [(0, 1, 2), (0, 1, 3), (2, 2, 2)]
    assert oracle.candidate_set(stored, PartialMessage.known((2, 2, 2), 4)) == [(2, 2, 2)]
    assert oracle.candidate_set(stored, PartialMessage((ERASED,) * 3, 4)) == stored
    assert oracle.candidate_set(stored, PartialMessage((0, 1, ERASED), 4)) == [(0, 1, 2), (0, 1, 3)]
    assert oracle.candidate_set(stored, PartialMessage((0, 1, frozenset({3, 0})), 4)) == [(0, 1, 3)]
