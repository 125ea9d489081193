"""
Block-cipher calls per mode and bytes per frame
===============================================

Counts how many times each mode invokes the block cipher for an N-block
message, then shows what each security configuration adds to a frame.
"""

from linksec import modes
from linksec.ciphers import make_cipher
from linksec.modes import CallLedger
from linksec.packet import HEADER_BYTES, FrameHeader, seal_frame
from linksec.policy import MODE_TABLE

aes = make_cipher("aes_speed", bytes(range(16)))
nonce = bytes(16)


def calls(run):
    led = CallLedger()
    run(led)
    return led.cipher_calls


# two-pass CBC + CBC-MAC against single-pass OCB and the CTR-based AE modes
print(f"{'N':>3} {'cbc':>5} {'cbc_mac':>8} {'cbc+mac':>8} {'ocb':>5} {'ccm':>5} {'gcm':>5}")
for n in (1, 2, 4, 8, 16):
    msg = bytes(16 * n)
    row = [
        calls(lambda led: modes.cbc_encrypt(aes, nonce, msg, led)),
        calls(lambda led: modes.cbc_mac(aes, msg, 8, led)),
        calls(lambda led: (modes.cbc_encrypt(aes, nonce, msg, led), modes.cbc_mac(aes, msg, 8, led))),
        calls(lambda led: modes.ocb_seal(aes, nonce, msg, 8, led)),
        calls(lambda led: modes.ccm_seal(aes, nonce[:13], msg, 8, ledger=led)),
        calls(lambda led: modes.gcm_seal(aes, nonce[:12], msg, ledger=led)),
    ]
    print(f"{n:>3} " + " ".join(f"{v:>{w}}" for v, w in zip(row, (5, 8, 8, 5, 5, 5))))

# per-frame overhead of the nine configurations, 16-byte payload
xx = make_cipher("xxtea_opt", bytes(range(16)))
header = FrameHeader(dest=2, am=0x0A, len=0, src=1, ctr=1)
print()
for m in MODE_TABLE:
    wire = seal_frame(m, xx, header, bytes(16)).encode()
    print(f"{m.id}  {m.name:<26} {len(wire):>3} bytes  (+{len(wire) - HEADER_BYTES - 16})")
