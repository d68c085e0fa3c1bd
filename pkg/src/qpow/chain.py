"""Block structure, qPoW hash composition, mining loop, and chain verification.

The proof hash sandwiches the quantum sampling step between two SHA3-256
applications: h1 = sha3(text), then the circuit built from h1 yields an n-bit
outcome b, and the proof is h2 = sha3(h1 ++ pack(b)). Re-including h1 in the
second hash keeps the full 256-bit preimage resistance even though b carries
only n bits, and makes the proof a pure function of the input text under the
exact backend. A block verifies when its recorded proof re-derives exactly,
which costs a single circuit simulation.
"""
from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, build_ansatz, count_two_qubit_gates
from .hashing import DIGEST_SIZE, check_digest, encode_angles, sha3_256
from .noise import NoiseParams, noisy_outcome
from .simulator import most_probable_state, simulate

ZERO_HASH = bytes(DIGEST_SIZE)
NONCE_BITS = 32
MAX_DIFFICULTY = 2 * DIGEST_SIZE
DEFAULT_MAX_ATTEMPTS = 1 << 20
GENESIS_PAYLOAD = "genesis"

# Nonces are drawn in independently seeded chunks of this size so that the
# parallel search visits the same stream as the sequential one.
NONCE_CHUNK = 32


class ChainFormatError(ValueError):
    """A chain file does not parse into the documented block schema."""


class MiningExhausted(RuntimeError):
    """The attempt cap was hit before any nonce passed the difficulty test."""

    def __init__(self, attempts: int):
        super().__init__(f"no valid nonce within {attempts} attempts")
        self.attempts = attempts


class ExactBackend:
    """Deterministic backend: the simulator's most-probable state."""

    def outcome(self, state: np.ndarray, circuit: Circuit) -> str:
        return most_probable_state(state).bits


class NoisyBackend:
    """Backend whose answers degrade like noisy hardware.

    Owns its generator; concurrent use requires separate instances.
    """

    def __init__(self, params: NoiseParams):
        self.params = params
        self._rng = np.random.default_rng(params.seed)

    def outcome(self, state: np.ndarray, circuit: Circuit) -> str:
        cnots = self.params.effective_cnots
        if cnots is None:
            cnots = float(count_two_qubit_gates(circuit))
        return noisy_outcome(state, self.params, cnots, self._rng)


EXACT = ExactBackend()

Backend = ExactBackend | NoisyBackend


@dataclass(frozen=True)
class Block:
    """One ledger entry; ``pow_hash`` re-derives from the other hashed fields."""

    index: int
    timestamp: int
    prev_hash: bytes
    payload: str
    nonce: int
    n_qubits: int
    pow_hash: bytes


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class BlockCheck:
    index: int
    ok: bool
    reason: str


@dataclass(frozen=True)
class ChainVerification:
    ok: bool
    checks: tuple[BlockCheck, ...]

    def __bool__(self) -> bool:
        return self.ok

    @property
    def first_failure(self) -> BlockCheck | None:
        return next((c for c in self.checks if not c.ok), None)

    @property
    def pass_fraction(self) -> float:
        """Fraction of mined (non-genesis) blocks that verify."""
        mined = [c for c in self.checks if c.index > 0]
        if not mined:
            return 1.0
        return sum(c.ok for c in mined) / len(mined)


def serialize_text(nonce: int, payload: str, prev_hash: bytes) -> bytes:
    """UTF-8 bytes of: decimal nonce, payload, lowercase hex of the previous hash."""
    if not 0 <= nonce < 1 << NONCE_BITS:
        raise ValueError(f"nonce must be an unsigned {NONCE_BITS}-bit integer, got {nonce}")
    check_digest(prev_hash)
    return f"{nonce}{payload}{prev_hash.hex()}".encode("utf-8")


def pack_bits(bits: str) -> bytes:
    """Pack an n-bit string into ceil(n/8) bytes, MSB first, zero-padded on the right."""
    if not bits or any(b not in "01" for b in bits):
        raise ValueError(f"expected a non-empty bit string, got {bits!r}")
    n_bytes = (len(bits) + 7) // 8
    return (int(bits, 2) << (8 * n_bytes - len(bits))).to_bytes(n_bytes, "big")


def qpow_hash(text: bytes, n_qubits: int, backend: Backend | None = None) -> bytes:
    """The full proof pipeline: sha3 -> angles -> ansatz -> outcome -> sha3."""
    backend = EXACT if backend is None else backend
    h1 = sha3_256(text)
    circuit = build_ansatz(encode_angles(h1), n_qubits)
    bits = backend.outcome(simulate(circuit), circuit)
    return sha3_256(h1 + pack_bits(bits))


def check_difficulty(digest: bytes, difficulty: int) -> bool:
    """True iff the hex rendering starts with ``difficulty`` zero characters."""
    if not 0 <= difficulty <= MAX_DIFFICULTY:
        raise ValueError(f"difficulty must be in [0, {MAX_DIFFICULTY}], got {difficulty}")
    return check_digest(digest).hex().startswith("0" * difficulty)


def make_genesis(n_qubits: int = 4, timestamp: int | None = None) -> Block:
    """The fixed-form first block: payload 'genesis', zero nonce, all-zero prev hash."""
    ts = int(time.time()) if timestamp is None else timestamp
    pow_hash = qpow_hash(serialize_text(0, GENESIS_PAYLOAD, ZERO_HASH), n_qubits)
    return Block(0, ts, ZERO_HASH, GENESIS_PAYLOAD, 0, n_qubits, pow_hash)


def _nonce_chunk(seed: int, chunk_index: int, size: int) -> np.ndarray:
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(chunk_index,))
    return np.random.default_rng(seq).integers(0, 1 << NONCE_BITS, size=size, dtype=np.uint64)


def _scan_chunk(args: tuple) -> tuple[int, int, bytes] | None:
    # Worker for the parallel search; exact backend only, so it is pure.
    payload, prev_hash, n_qubits, difficulty, seed, chunk_index, size = args
    for offset, nonce in enumerate(_nonce_chunk(seed, chunk_index, size)):
        digest = qpow_hash(serialize_text(int(nonce), payload, prev_hash), n_qubits)
        if check_difficulty(digest, difficulty):
            return offset, int(nonce), digest
    return None


def mine_block(prev: Block, payload: str, difficulty: int, n_qubits: int,
               backend: Backend | None = None, seed: int = 0,
               max_attempts: int = DEFAULT_MAX_ATTEMPTS, jobs: int = 1) -> tuple[Block, int]:
    """Draw random nonces until the proof passes the difficulty test.

    Returns the mined block and the number of attempts spent; raises
    MiningExhausted past ``max_attempts``. With ``jobs`` > 1 chunks of the
    nonce stream fan out to worker processes (exact backend only); the mined
    block is identical for any job count because the earliest successful
    attempt wins regardless of completion order.
    """
    if max_attempts < 1:
        raise ValueError(f"max_attempts must be >= 1, got {max_attempts}")
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    exact = backend is None or isinstance(backend, ExactBackend)
    if jobs > 1 and not exact:
        raise ValueError("parallel nonce search supports the exact backend only")

    n_chunks = (max_attempts + NONCE_CHUNK - 1) // NONCE_CHUNK

    def chunk_size(ci: int) -> int:
        return min(NONCE_CHUNK, max_attempts - ci * NONCE_CHUNK)

    found: tuple[int, int, bytes] | None = None
    if jobs == 1:
        be = EXACT if backend is None else backend
        for ci in range(n_chunks):
            for offset, nonce in enumerate(_nonce_chunk(seed, ci, chunk_size(ci))):
                text = serialize_text(int(nonce), payload, prev.pow_hash)
                digest = qpow_hash(text, n_qubits, be)
                if check_difficulty(digest, difficulty):
                    found = (ci * NONCE_CHUNK + offset, int(nonce), digest)
                    break
            if found:
                break
    else:
        wave = 2 * jobs
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for start in range(0, n_chunks, wave):
                batch = range(start, min(start + wave, n_chunks))
                args = [(payload, prev.pow_hash, n_qubits, difficulty, seed, ci, chunk_size(ci))
                        for ci in batch]
                for ci, result in zip(batch, pool.map(_scan_chunk, args)):
                    if result is not None:
                        offset, nonce, digest = result
                        found = (ci * NONCE_CHUNK + offset, nonce, digest)
                        break
                if found:
                    break

    if found is None:
        raise MiningExhausted(max_attempts)
    attempt_index, nonce, digest = found
    block = Block(prev.index + 1, int(time.time()), prev.pow_hash,
                  payload, nonce, n_qubits, digest)
    return block, attempt_index + 1


def verify_block(block: Block, prev: Block, difficulty: int) -> Verdict:
    """Re-derive the proof with the exact backend; at most one simulation.

    The boolean verdict carries a reason code: prev-hash, pow-hash,
    difficulty, or ok.
    """
    if block.prev_hash != prev.pow_hash:
        return Verdict(False, "prev-hash")
    recomputed = qpow_hash(serialize_text(block.nonce, block.payload, block.prev_hash),
                           block.n_qubits)
    if recomputed != block.pow_hash:
        return Verdict(False, "pow-hash")
    if not check_difficulty(block.pow_hash, difficulty):
        return Verdict(False, "difficulty")
    return Verdict(True, "ok")


def verify_chain(chain: list[Block], difficulty: int) -> ChainVerification:
    """Check the genesis structure and every adjacent pair of blocks.

    Each mined block is judged independently against its stored predecessor,
    so one bad block does not mask the verdicts of the blocks after it.
    The genesis is held to structure and proof re-derivation, not difficulty.
    """
    if not chain:
        raise ValueError("chain must be non-empty")
    checks: list[BlockCheck] = []
    genesis = chain[0]
    if genesis.index != 0 or genesis.prev_hash != ZERO_HASH:
        checks.append(BlockCheck(genesis.index, False, "genesis-structure"))
    else:
        text = serialize_text(genesis.nonce, genesis.payload, genesis.prev_hash)
        ok = qpow_hash(text, genesis.n_qubits) == genesis.pow_hash
        checks.append(BlockCheck(0, ok, "ok" if ok else "pow-hash"))
    for prev, block in zip(chain, chain[1:]):
        if block.index != prev.index + 1:
            checks.append(BlockCheck(block.index, False, "index"))
            continue
        verdict = verify_block(block, prev, difficulty)
        checks.append(BlockCheck(block.index, verdict.ok, verdict.reason))
    return ChainVerification(all(c.ok for c in checks), tuple(checks))


# Chain file interchange: a JSON array of block objects with exactly these
# fields; hashes render as 64-char lowercase hex.
_BLOCK_FIELDS = ("index", "timestamp", "prev_hash", "payload", "nonce", "n_qubits", "pow_hash")


def block_to_dict(block: Block) -> dict:
    return {
        "index": block.index,
        "timestamp": block.timestamp,
        "prev_hash": block.prev_hash.hex(),
        "payload": block.payload,
        "nonce": block.nonce,
        "n_qubits": block.n_qubits,
        "pow_hash": block.pow_hash.hex(),
    }


def block_from_dict(data: dict) -> Block:
    if not isinstance(data, dict) or set(data) != set(_BLOCK_FIELDS):
        raise ChainFormatError(f"block object must have exactly the fields {_BLOCK_FIELDS}")
    try:
        block = Block(
            index=int(data["index"]),
            timestamp=int(data["timestamp"]),
            prev_hash=bytes.fromhex(data["prev_hash"]),
            payload=str(data["payload"]),
            nonce=int(data["nonce"]),
            n_qubits=int(data["n_qubits"]),
            pow_hash=bytes.fromhex(data["pow_hash"]),
        )
    except (TypeError, ValueError) as exc:
        raise ChainFormatError(f"bad block field: {exc}") from exc
    if len(block.prev_hash) != DIGEST_SIZE or len(block.pow_hash) != DIGEST_SIZE:
        raise ChainFormatError("hash fields must be 64 hex characters")
    return block


def save_chain(chain: list[Block], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([block_to_dict(b) for b in chain], fh, indent=2)
        fh.write("\n")


def load_chain(path: str | os.PathLike) -> list[Block]:
    """Parse a chain file; raises ChainFormatError on any structural problem."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ChainFormatError(f"chain file is not valid JSON: {exc}") from exc
    if not isinstance(data, list) or not data:
        raise ChainFormatError("chain file must be a non-empty JSON array of blocks")
    return [block_from_dict(entry) for entry in data]
