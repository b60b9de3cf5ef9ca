# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

from belleff.protocols.protocol import (
    CommProtocol,
    ProtocolMixture,
    ProtocolReport,
    is_one_way,
    local_protocol,
    output_distribution,
    pad_protocol,
    pr_protocol,
    validate_protocol,
    xor_transcript_protocol,
)
from belleff.protocols.reductions import (
    PartitionPoint,
    Reduction,
    conditional_distribution,
    protocol_to_partition,
    transcript_reduction,
)
from belleff.protocols.simulation import Amplification, Simulator, amplify_sm, monte_carlo

__all__ = [
    "Amplification",
    "CommProtocol",
    "PartitionPoint",
    "ProtocolMixture",
    "ProtocolReport",
    "Reduction",
    "Simulator",
    "amplify_sm",
    "conditional_distribution",
    "is_one_way",
    "local_protocol",
    "monte_carlo",
    "output_distribution",
    "pad_protocol",
    "pr_protocol",
    "protocol_to_partition",
    "transcript_reduction",
    "validate_protocol",
    "xor_transcript_protocol",
]
