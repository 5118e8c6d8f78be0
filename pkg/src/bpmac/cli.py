"""``bpmac`` command line.

Exit codes: 0 success/accept, 1 verification failure, 2 usage error,
3 I/O or format error.
"""

from __future__ import annotations

import argparse
import logging
import random
import socket
import sys
from pathlib import Path

from . import bench
from .core import BPMac, KeyMaterial, MacParams, MessageTooLongError, build_table, key_fingerprint
from .formats import FormatError, read_key_file, read_table, write_key_file, write_table
from .oracle import sign_naive
from .session import Receiver, Sender

EXIT_OK, EXIT_REJECT, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("bpmac")


class UsageError(Exception):
    pass


def _hex(value: str, what: str) -> bytes:
    try:
        return bytes.fromhex(value)
    except ValueError:
        raise UsageError(f"{what} is not valid hex: {value!r}") from None


def _nonce(value: str) -> int:
    n = int(value, 0)
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("nonce must be in [0, 2^64)")
    return n


def _tag_len(value: str) -> int:
    L = int(value)
    if not 1 <= L <= 16:
        raise argparse.ArgumentTypeError("tag length must be in [1, 16]")
    return L


def _endpoint(value: str) -> tuple[str, int]:
    host, _, port = value.rpartition(":")
    if not host or not port.isdigit():
        raise argparse.ArgumentTypeError("endpoint must be HOST:PORT")
    return host, int(port)


def _load_mac(args) -> BPMac:
    keys = read_key_file(args.key)
    if getattr(args, "table", None):
        table = read_table(args.table)
        if table.key_id != key_fingerprint(keys.k1):
            raise FormatError(f"{args.table} was precomputed for a different key")
        return BPMac(keys, table=table, constant_time=args.constant_time)
    return BPMac(keys, MacParams(args.tag_len, args.max_len), constant_time=args.constant_time)


def _message(args) -> bytes:
    if args.msg is not None:
        return _hex(args.msg, "--msg")
    if args.input is not None:
        return Path(args.input).read_bytes()
    raise UsageError("one of --msg or --in is required")


def cmd_keygen(args) -> int:
    write_key_file(args.out, KeyMaterial.generate())
    log.info("wrote 32-byte key file %s", args.out)
    return EXIT_OK


def cmd_precompute(args) -> int:
    keys = read_key_file(args.key)
    table = build_table(keys.k1, MacParams(args.tag_len, args.max_len))
    write_table(args.out, table)
    return EXIT_OK


def cmd_sign(args) -> int:
    mac = _load_mac(args)
    tag = mac.sign(_message(args), args.nonce)
    print(tag.hex(), args.nonce)
    return EXIT_OK


def cmd_verify(args) -> int:
    mac = _load_mac(args)
    ok = mac.verify(_message(args), args.nonce, _hex(args.tag, "--tag"))
    print("accept" if ok else "reject")
    return EXIT_OK if ok else EXIT_REJECT


def cmd_vectors(args) -> int:
    keys = read_key_file(args.key)
    params = MacParams(args.tag_len, args.max_len)
    rng = random.Random(args.seed)
    lines = []
    for _ in range(args.count):
        msg = rng.randbytes(rng.randint(0, params.max_msg_len))
        n = rng.getrandbits(64)
        lines.append(f"{msg.hex()},{n},{sign_naive(keys, params, msg, n).hex()}\n")
    text = "".join(lines)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_demo(args) -> int:
    mac = _load_mac(args)
    host, port = args.endpoint
    with socket.socket(socket.AF_INET, socket.SOCK_DGRAM) as sock:
        if args.role == "send":
            return _demo_send(sock, (host, port), mac, args)
        sock.bind((host, port))
        return _demo_recv(sock, mac, args)


def _demo_send(sock, addr, mac: BPMac, args) -> int:
    sender = Sender(mac)
    rng = random.Random(args.seed)
    sent = []
    for i in range(args.count):
        msg = f"reading {i}".encode()[: mac.params.max_msg_len]
        dgram = sender.seal(msg)
        sent.append(dgram)
        sock.sendto(dgram, addr)
    for dgram in rng.sample(sent, min(args.replay, len(sent))):
        sock.sendto(dgram, addr)
    for _ in range(args.corrupt):
        dgram = bytearray(rng.choice(sent))
        bit = rng.randrange(8 * len(dgram))
        dgram[bit // 8] ^= 0x80 >> (bit % 8)
        sock.sendto(bytes(dgram), addr)
    print(f"sent genuine={len(sent)} replayed={min(args.replay, len(sent))} corrupted={args.corrupt}")
    return EXIT_OK


def _demo_recv(sock, mac: BPMac, args) -> int:
    receiver = Receiver(mac)
    sock.settimeout(args.timeout)
    accepted = rejected = 0
    while args.count <= 0 or accepted + rejected < args.count:
        try:
            data, _ = sock.recvfrom(65535)
        except socket.timeout:
            break
        v = receiver.open(data)
        if v.accepted:
            accepted += 1
            print(f"accept nonce={v.nonce} msg={v.msg.hex()}", flush=True)
        else:
            rejected += 1
            print(f"reject nonce={v.nonce} reason={v.reason}", flush=True)
    print(f"accepted={accepted} rejected={rejected}", flush=True)
    return EXIT_OK


def cmd_bench(args) -> int:
    tag_lens = tuple(args.tag_len) if args.tag_len else (4, 8, 12, 16)
    msg_lens = tuple(range(1, args.max_len + 1))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    model = bench.run_memory_model(tag_lens, msg_lens, tuple(args.band))
    bench.emit_memory_report(model, out / "memory.json")
    for c in model.crossovers:
        print(f"memory L={c.tag_len}: band entered at M={c.first_in_band}, tipoff M={c.tipoff} "
              f"({c.tipoff_footprint} bytes)")
    if args.mem_only:
        return EXIT_OK
    cfg = bench.BenchConfig(
        schemes=tuple(args.schemes), msg_lens=msg_lens, tag_lens=tag_lens,
        iterations=args.iterations, repetitions=args.repetitions,
        constant_time=args.constant_time, seed=args.seed,
    )
    rows = bench.run_latency_bench(cfg)
    suffix = {"csv": "csv", "json": "json", "plot-data": "plot.json"}[args.format]
    path = bench.emit_report(rows, args.format, out / f"latency.{suffix}")
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bpmac", description="Bitwise precomputed MAC for short messages")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def params(sp, table=True):
        sp.add_argument("--key", required=True, help="32-byte key file (k1 || k2)")
        if table:
            sp.add_argument("--table", help="precomputed table; overrides --max-len/--tag-len")
        sp.add_argument("--tag-len", type=_tag_len, default=16)
        sp.add_argument("--max-len", type=int, default=32, help="maximum message length in bytes")

    sp = sub.add_parser("keygen", help="write a fresh key file")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_keygen)

    sp = sub.add_parser("precompute", help="build and serialize a bit table")
    params(sp, table=False)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_precompute)

    for name, func in (("sign", cmd_sign), ("verify", cmd_verify)):
        sp = sub.add_parser(name, help=f"{name} a message")
        params(sp)
        sp.add_argument("--msg", help="message as hex")
        sp.add_argument("--in", dest="input", help="message file (raw bytes)")
        sp.add_argument("--nonce", type=_nonce, required=True)
        sp.add_argument("--constant-time", action="store_true")
        if name == "verify":
            sp.add_argument("--tag", required=True, help="tag as hex")
        sp.set_defaults(func=func)

    sp = sub.add_parser("vectors", help="generate test vectors with the naive reference")
    params(sp, table=False)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_vectors)

    sp = sub.add_parser("demo", help="authenticated UDP loopback demo")
    params(sp)
    sp.add_argument("--role", choices=("send", "recv"), required=True)
    sp.add_argument("--endpoint", type=_endpoint, default=("127.0.0.1", 9797))
    sp.add_argument("--count", type=int, default=100,
                    help="send: genuine datagrams; recv: datagrams to process (0 = until idle)")
    sp.add_argument("--replay", type=int, default=0, help="send: replay this many sent datagrams")
    sp.add_argument("--corrupt", type=int, default=0, help="send: inject this many bit-flipped datagrams")
    sp.add_argument("--timeout", type=float, default=5.0, help="recv: stop after this idle time")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--constant-time", action="store_true")
    sp.set_defaults(func=cmd_demo)

    sp = sub.add_parser("bench", help="latency benchmark and memory model")
    sp.add_argument("--schemes", nargs="+", choices=bench.SCHEMES, default=list(bench.SCHEMES))
    sp.add_argument("--tag-len", type=_tag_len, action="append")
    sp.add_argument("--max-len", type=int, default=32)
    sp.add_argument("--iterations", type=int, default=100)
    sp.add_argument("--repetitions", type=int, default=30)
    sp.add_argument("--format", choices=("csv", "json", "plot-data"), default="csv")
    sp.add_argument("--out", default="bench-out")
    sp.add_argument("--band", type=int, nargs=2, default=(1350, 1600), metavar=("LOW", "HIGH"),
                    help="baseline memory footprint band in bytes")
    sp.add_argument("--mem-only", action="store_true")
    sp.add_argument("--constant-time", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, MessageTooLongError) as e:
        print(f"bpmac: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, FormatError) as e:
        print(f"bpmac: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"bpmac: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
