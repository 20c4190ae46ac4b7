"""slicerng: bitsliced keystream generators with validation and benchmarks.

Column-major ("bitsliced") layout packs bit i of W independent generator
instances into one machine word, so plain word logic advances all W
lanes per clock and the shift structure of LFSR-based ciphers becomes
register re-referencing. The package provides bit-serial reference
engines and sliced engines for MICKEY 2.0, Grain v1 and AES-128 CTR, a
generic LFSR, a CRC-8 worked example, lane seed derivation, a NIST
SP 800-22 statistical subset, and a throughput benchmark harness.
"""

from .bitslab import (
    RowBlock,
    SlicedBlock,
    extract_lane,
    rotate_registers,
    transpose_to_rows,
    transpose_to_sliced,
)
from .lfsr import FeedbackSpec, ScalarLfsr, SlicedLfsr, period_bruteforce
from .crc8 import CrcSpec, crc8_scalar, crc8_sliced
from .mickey import MickeyKeyIv, MickeyScalar, MickeySliced
from .grain import GrainKeyIv, GrainScalar, GrainSliced
from .aes_ctr import AesScalarTable, AesSliced, ctr_keystream, key_expand
from .seedgen import MasterSeed, derive_lane_material
from .stats import BitStream, SuiteParams, TestReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "RowBlock",
    "SlicedBlock",
    "extract_lane",
    "rotate_registers",
    "transpose_to_rows",
    "transpose_to_sliced",
    "FeedbackSpec",
    "ScalarLfsr",
    "SlicedLfsr",
    "period_bruteforce",
    "CrcSpec",
    "crc8_scalar",
    "crc8_sliced",
    "MickeyKeyIv",
    "MickeyScalar",
    "MickeySliced",
    "GrainKeyIv",
    "GrainScalar",
    "GrainSliced",
    "AesScalarTable",
    "AesSliced",
    "ctr_keystream",
    "key_expand",
    "MasterSeed",
    "derive_lane_material",
    "BitStream",
    "SuiteParams",
    "TestReport",
    "run_suite",
    "__version__",
]
