"""
Wire frames and the pluggable transport
=======================================

Every message travels as a 29-byte little-endian header plus payload.  The
same send/recv/counters contract is served by an in-process backend and a
TCP backend; this script drives both.
"""

import threading

from parcelfft import Frame, decode_frame, encode_frame
from parcelfft.transport import HostTable, InprocGroup, endpoint_init

# --- the frame layout, bit for bit --------------------------------------
frame = Frame(src=0, dst=1, tag=7, payload=b"hello")
raw = encode_frame(frame)
print("frame bytes:", raw.hex(" "))
print("decodes to :", decode_frame(raw))

# --- in-process endpoints ------------------------------------------------
group = InprocGroup(2)
ep0 = endpoint_init("inproc", 0, group)
ep1 = endpoint_init("inproc", 1, group)

ep0.send(1, tag=7, payload=b"ping")
print("\ninproc recv:", ep1.recv(0, tag=7).result(timeout=5))

c = ep0.counters()
print(f"rank 0 counters: messages={c.messages_sent} payload={c.off_rank_payload_sent}B "
      f"headers={c.header_sent}B")
ep0.shutdown()
ep1.shutdown()

# --- the same exchange over TCP loopback ---------------------------------
import socket

def free_ports(n):
    socks = [socket.socket() for _ in range(n)]
    for s in socks:
        s.bind(("127.0.0.1", 0))
    ports = [s.getsockname()[1] for s in socks]
    for s in socks:
        s.close()
    return ports

table = HostTable(tuple((r, "127.0.0.1", p) for r, p in enumerate(free_ports(2))))
eps = [None, None]

def bring_up(rank):
    eps[rank] = endpoint_init("tcp", rank, table)

threads = [threading.Thread(target=bring_up, args=(r,)) for r in range(2)]
for t in threads:
    t.start()
for t in threads:
    t.join()

eps[0].send(1, tag=9, payload=b"over the wire")
print("\ntcp recv   :", eps[1].recv(0, tag=9).result(timeout=5))
print("tcp peers  :", [ep.connected_peers for ep in eps])
for ep in eps:
    ep.shutdown()
