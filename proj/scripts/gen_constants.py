#!/usr/bin/env python3
"""Generate the bundled Poseidon constants file.

Constants are expanded deterministically from a fixed tag with SHA-256 in
counter mode; candidate 64-bit words are taken little-endian and rejected
until canonical (< P). Regenerating with the same tag reproduces the file
byte for byte.
"""

import hashlib
import json
import pathlib

P = 2**64 - 2**32 + 1
TAG = b"glv-poseidon-goldilocks-t12-rf8-rp22-v1"

STATE_WIDTH = 12
HALF_FULL_ROUNDS = 4
PARTIAL_ROUNDS = 22
CONSTANT_BLOCKS = 1 + 2 * HALF_FULL_ROUNDS


class Expander:
    def __init__(self, tag: bytes):
        self.tag = tag
        self.counter = 0
        self.buffer = b""

    def _refill(self):
        block = hashlib.sha256(self.tag + self.counter.to_bytes(8, "little")).digest()
        self.counter += 1
        self.buffer += block

    def next_element(self) -> int:
        while True:
            while len(self.buffer) < 8:
                self._refill()
            candidate = int.from_bytes(self.buffer[:8], "little")
            self.buffer = self.buffer[8:]
            if candidate < P:
                return candidate


def main():
    ex = Expander(TAG)
    c_blocks = [[str(ex.next_element()) for _ in range(STATE_WIDTH)]
                for _ in range(CONSTANT_BLOCKS)]
    m = [[str(ex.next_element()) for _ in range(STATE_WIDTH)]
         for _ in range(STATE_WIDTH)]
    s_blocks = [{"v0": [str(ex.next_element()) for _ in range(STATE_WIDTH)],
                 "v1": [str(ex.next_element()) for _ in range(STATE_WIDTH)]}
                for _ in range(PARTIAL_ROUNDS)]

    out = {
        "half_full_rounds": HALF_FULL_ROUNDS,
        "partial_rounds": PARTIAL_ROUNDS,
        "C": c_blocks,
        "M": m,
        "S": s_blocks,
    }
    path = pathlib.Path(__file__).resolve().parent.parent / "data" / "poseidon_constants.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(out, indent=1) + "\n")
    print(f"wrote {path}")


if __name__ == "__main__":
    main()
