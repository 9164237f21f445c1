"""Associative memories built on sparse clustered networks with multiple-valued weights."""
from mvscn.codec import ERASED, PartialMessage, Retrieval, activation_to_message, erase, local_decode
from mvscn.core import NetworkConfig, WeightMatrix, memory_bits, new_network
from mvscn.decoding import Arch, DecodeResult, decode, score_arch1, score_arch2, step_arch3, winner_take_all
from mvscn.experiment import (
    ExperimentSpec, TrialStats, equal_memory_binary_spec, generate_messages, run_experiment,
    run_trial, sweep,
)
from mvscn.learning import delete, density_measured, density_predicted, messages_for_density, store, update

__version__ = "0.1.0"

__all__ = [
    "ERASED", "PartialMessage", "Retrieval", "activation_to_message", "erase", "local_decode",
    "NetworkConfig", "WeightMatrix", "memory_bits", "new_network",
    "Arch", "DecodeResult", "decode", "score_arch1", "score_arch2", "step_arch3", "winner_take_all",
    "ExperimentSpec", "TrialStats", "equal_memory_binary_spec", "generate_messages", "run_experiment",
    "run_trial", "sweep",
    "delete", "density_measured", "density_predicted", "messages_for_density", "store", "update",
]
