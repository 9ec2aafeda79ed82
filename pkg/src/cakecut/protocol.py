"""Line-delimited JSON protocol for black-box mechanisms in other processes.

One request per line on stdin:   {"A": <interval set>, "B": <interval set>}
One response per line on stdout: {"C": <interval set>, "D": <interval set>}

Interval sets use the {"intervals": [["p/q", "p/q"], ...]} encoding.  The
conversation ends when the client closes stdin.
"""

from __future__ import annotations

import json
import shlex
import subprocess
from typing import IO

from .general import Allocation, MechanismOracle
from .intervals import IntervalSet


class OracleProtocolError(Exception):
    """The other side of the pipe broke the protocol."""


def decode_request(line: str) -> tuple[IntervalSet, IntervalSet]:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise OracleProtocolError(f"request is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "A" not in obj or "B" not in obj:
        raise OracleProtocolError('request must be {"A": ..., "B": ...}')
    try:
        return IntervalSet.from_json(obj["A"]), IntervalSet.from_json(obj["B"])
    except ValueError as exc:
        raise OracleProtocolError(f"bad demand in request: {exc}") from exc


def encode_request(A: IntervalSet, B: IntervalSet) -> str:
    return json.dumps({"A": A.to_json(), "B": B.to_json()})


def decode_response(line: str) -> Allocation:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise OracleProtocolError(f"response is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "C" not in obj or "D" not in obj:
        raise OracleProtocolError('response must be {"C": ..., "D": ...}')
    try:
        return Allocation(IntervalSet.from_json(obj["C"]), IntervalSet.from_json(obj["D"]))
    except ValueError as exc:
        raise OracleProtocolError(f"bad piece in response: {exc}") from exc


def encode_response(allocation: Allocation) -> str:
    return json.dumps({"C": allocation.C.to_json(), "D": allocation.D.to_json()})


def serve_oracle(mech: MechanismOracle, in_stream: IO[str], out_stream: IO[str]) -> int:
    """Answer requests from `in_stream` until it closes.  Returns the count."""
    served = 0
    for line in in_stream:
        if not line.strip():
            continue
        A, B = decode_request(line)
        out_stream.write(encode_response(mech(A, B)) + "\n")
        out_stream.flush()
        served += 1
    return served


class SubprocessOracle:
    """Wrap a command line speaking the protocol as a MechanismOracle.

    Usable as a context manager; the child's stderr passes through.
    """

    def __init__(self, command: str | list[str]):
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        self._proc = subprocess.Popen(
            argv,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )

    def __call__(self, A: IntervalSet, B: IntervalSet) -> Allocation:
        if self._proc.poll() is not None:
            raise OracleProtocolError(
                f"oracle process exited with status {self._proc.returncode}"
            )
        assert self._proc.stdin is not None and self._proc.stdout is not None
        self._proc.stdin.write(encode_request(A, B) + "\n")
        self._proc.stdin.flush()
        line = self._proc.stdout.readline()
        if not line:
            raise OracleProtocolError("oracle process closed its output mid-conversation")
        return decode_response(line)

    def close(self):
        if self._proc.stdin is not None:
            try:
                self._proc.stdin.close()
            except OSError:
                pass
        try:
            self._proc.wait(timeout=5)
        except subprocess.TimeoutExpired:
            self._proc.kill()
            self._proc.wait()

    def __enter__(self) -> "SubprocessOracle":
        return self

    def __exit__(self, *exc_info):
        self.close()
