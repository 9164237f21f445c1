import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvscn.core import NetworkConfig, WeightMatrix, memory_bits, new_network


def test_config_defaults():
    cfg = NetworkConfig(c=8, l=16, w_max=3)
    assert cfg.sigma == 8
    assert cfg.gamma == 1
    assert cfg.n == 128
    assert cfg.bits_per_weight == 2
    assert cfg.kappa == 4
    assert NetworkConfig(8, 23).kappa is None


@pytest.mark.parametrize("kw", [dict(c=1, l=4), dict(c=3, l=1), dict(c=3, l=4, w_max=0),
                                dict(c=3, l=4, w_min=1)])
def test_config_rejects(kw):
    with pytest.raises(ValueError):
        NetworkConfig(**kw)


@pytest.mark.parametrize("c, l, w_max, slots", [(8, 16, 3, 7168), (3, 4, 1, 48)])
def test_new_network_empty(c, l, w_max, slots):
    net = new_network(NetworkConfig(c, l, w_max))
    assert net.config.pair_count == slots
    assert not net.weights.any()


def test_get_set_symmetry():
    net = new_network(NetworkConfig(3, 4, 3))
    assert net.get_weight(0, 0, 1, 0) == 0
    net.set_weight(0, 0, 1, 0, 2)
    assert net.get_weight(1, 0, 0, 0) == 2
    assert net.get_weight(0, 1, 0, 2) == 0


def test_set_rejects():
    net = new_network(NetworkConfig(3, 4, 3))
    with pytest.raises(ValueError):
        net.set_weight(0, 0, 1, 0, 4)
    with pytest.raises(ValueError):
        net.set_weight(0, 0, 0, 1, 1)
    with pytest.raises(IndexError):
        net.get_weight(3, 0, 0, 0)
    with pytest.raises(IndexError):
        net.get_weight(0, 4, 1, 0)


def _brute_pairs(c, l):
    # unordered inter-cluster pairs by direct enumeration
    return sum(1 for i in range(c) for j in range(l) for i2 in range(c) for j2 in range(l)
               if i < i2)


@pytest.mark.parametrize("c, l, w_max, expected", [
    (8, 16, 1, 7168),
    (8, 16, 3, 14336),
    (8, 23, 1, 14812),
])
def test_memory_bits(c, l, w_max, expected):
    cfg = NetworkConfig(c, l, w_max)
    assert memory_bits(cfg) == expected
    assert memory_bits(cfg) == _brute_pairs(c, l) * cfg.bits_per_weight


@given(st.integers(2, 6), st.integers(2, 12))
def test_memory_bits_doubles_from_binary_to_wmax3(c, l):
    assert memory_bits(NetworkConfig(c, l, 3)) == 2 * memory_bits(NetworkConfig(c, l, 1))


@settings(max_examples=50)
@given(
    w_max=st.integers(1, 7),
    ops=st.lists(st.tuples(st.integers(0, 2), st.integers(0, 3), st.integers(0, 2), st.integers(0, 3),
                           st.sampled_from([-1, 1])), max_size=60),
)
def test_symmetry_and_range_under_saturating_updates(w_max, ops):
    net = new_network(NetworkConfig(3, 4, w_max))
    for i, j, i2, j2, delta in ops:
        if i == i2:
            continue
        w = net.get_weight(i, j, i2, j2)
        net.set_weight(i, j, i2, j2, min(max(w + delta, 0), w_max))
    assert np.array_equal(net.weights, net.weights.T)
    assert net.weights.max() <= w_max
    for i in range(3):
        assert not net.weights[i * 4:(i + 1) * 4, i * 4:(i + 1) * 4].any()


@pytest.mark.parametrize("c, l, w_max", [(3, 4, 1), (3, 4, 3), (4, 5, 7), (8, 16, 3), (3, 3, 200)])
def test_snapshot_roundtrip(c, l, w_max):
    cfg = NetworkConfig(c, l, w_max)
    rng = np.random.default_rng(0)
    net = new_network(cfg)
    for _ in range(50):
        i, i2 = rng.choice(c, 2, replace=False)
        net.set_weight(int(i), int(rng.integers(l)), int(i2), int(rng.integers(l)), int(rng.integers(w_max + 1)))
    data = net.to_bytes()
    assert data[:4] == b"MVSN"
    assert len(data) == 12 + (memory_bits(cfg) + 7) // 8
    assert WeightMatrix.from_bytes(data) == net


def test_snapshot_layout_first_pair():
    # pair ((0,0),(1,0)) is the first packed entry, LSB first
    net = new_network(NetworkConfig(3, 4, 3))
    net.set_weight(0, 0, 1, 0, 2)
    net.set_weight(0, 0, 1, 1, 3)
    body = net.to_bytes()[12:]
    assert body[0] == 0b1110


def test_snapshot_rejects_garbage(tmp_path):
    with pytest.raises(ValueError):
        WeightMatrix.from_bytes(b"XXXX" + bytes(20))
    net = new_network(NetworkConfig(3, 4, 1))
    with pytest.raises(ValueError):
        WeightMatrix.from_bytes(net.to_bytes()[:-1])
    path = tmp_path / "net.bin"
    net.save(path)
    assert WeightMatrix.load(path) == net


def test_weight_matrix_validates_tables():
    cfg = NetworkConfig(3, 4, 1)
    w = np.zeros((12, 12), dtype=np.uint8)
    w[0, 1] = w[1, 0] = 1
    with pytest.raises(ValueError):
        WeightMatrix(cfg, w)
    w = np.zeros((12, 12), dtype=np.uint8)
    w[0, 4] = 1
    with pytest.raises(ValueError):
        WeightMatrix(cfg, w)
