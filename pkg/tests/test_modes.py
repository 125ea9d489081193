import random

import pytest
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes as cmodes
from cryptography.hazmat.primitives.ciphers.aead import AESCCM, AESGCM
from hypothesis import given, settings, strategies as st

from linksec import modes
from linksec.ciphers import cipher_spec, make_cipher
from linksec.modes import CallLedger, FORGED, VALID
from oracles.ocb_ref import ocb_reference

KEY = bytes.fromhex("000102030405060708090a0b0c0d0e0f")


def _aes():
    return make_cipher("aes_speed", KEY)


def _openssl_cbc(key, iv, data):
    enc = Cipher(algorithms.AES(key), cmodes.CBC(iv)).encryptor()
    return enc.update(data) + enc.finalize()


# -- CBC / CBC-MAC -----------------------------------------------------------

def test_cbc_matches_openssl_and_round_trips():
    rng = random.Random(3)
    c = _aes()
    for n in range(1, 30):
        pt, iv = rng.randbytes(n), rng.randbytes(16)
        ct = modes.cbc_encrypt(c, iv, pt)
        assert ct == _openssl_cbc(KEY, iv, pt + bytes(-n % 16))
        assert modes.cbc_decrypt(c, iv, ct, length=n) == pt


def test_cbc_single_block_zero_iv_is_ecb():
    c = _aes()
    p = bytes(range(16))
    assert modes.cbc_encrypt(c, bytes(16), p) == c.encrypt_block(p)
    iv = bytes(range(100, 116))
    ct = bytes(range(50, 66))
    assert modes.cbc_decrypt(c, iv, ct) == modes.xor(c.decrypt_block(ct), iv)


def test_cbc_error_propagation():
    c = make_cipher("xxtea_opt", bytes(16))
    pt = bytes(range(32))
    ct = bytearray(modes.cbc_encrypt(c, bytes(8), pt))
    ct[9] ^= 0x01  # block 1
    out = modes.cbc_decrypt(c, bytes(8), bytes(ct))
    blocks = lambda b: [b[i:i + 8] for i in range(0, 32, 8)]
    diff = [a != b for a, b in zip(blocks(out), blocks(pt))]
    assert diff == [False, True, True, False]


def test_cbc_errors():
    c = _aes()
    with pytest.raises(ValueError):
        modes.cbc_encrypt(c, bytes(16), b"")
    with pytest.raises(ValueError):
        modes.cbc_decrypt(c, bytes(16), b"")
    with pytest.raises(ValueError):
        modes.cbc_decrypt(c, bytes(16), bytes(17))
    with pytest.raises(ValueError):
        modes.cbc_encrypt(c, bytes(8), b"x")


def test_cbc_mac_matches_openssl_recurrence():
    rng = random.Random(4)
    c = _aes()
    for n in (1, 15, 16, 17, 40):
        msg = rng.randbytes(n)
        framed = n.to_bytes(16, "big") + msg + bytes(-n % 16)
        expect = _openssl_cbc(KEY, bytes(16), framed)[-16:]
        assert modes.cbc_mac(c, msg, 8) == expect[:8]
        assert modes.cbc_mac(c, msg, 4) == expect[:4]


def test_cbc_mac_tags_differ_on_one_bit():
    rng = random.Random(6)
    c = _aes()
    for _ in range(1000):
        msg = bytearray(rng.randbytes(24))
        t1 = modes.cbc_mac(c, bytes(msg), 8)
        bit = rng.randrange(24 * 8)
        msg[bit // 8] ^= 1 << (bit % 8)
        assert modes.cbc_mac(c, bytes(msg), 8) != t1


def test_cbc_mac_errors_and_verify():
    c = _aes()
    with pytest.raises(ValueError):
        modes.cbc_mac(c, b"abc", 16)
    with pytest.raises(ValueError):
        modes.cbc_mac(c, b"", 4)
    tag = modes.cbc_mac(c, b"abc", 4)
    assert modes.cbc_mac_verify(c, b"abc", tag)
    assert not modes.cbc_mac_verify(c, b"abd", tag)
    assert not modes.cbc_mac_verify(c, b"abc", tag[:3])


# -- OCB ---------------------------------------------------------------------

@pytest.mark.parametrize("name", ["aes_speed", "xxtea_opt", "skipjack"])
def test_ocb_matches_independent_restatement(name):
    rng = random.Random(7)
    spec = cipher_spec(name)
    c = make_cipher(name, rng.randbytes(spec.key_bytes))
    for n in (1, 7, 8, 15, 16, 17, 29, 33):
        pt = rng.randbytes(n)
        nonce = rng.randbytes(rng.randint(1, spec.block_bytes))
        out = modes.ocb_seal(c, nonce, pt, 8)
        ref_ct, ref_tag = ocb_reference(c.encrypt_block, spec.block_bytes, nonce, pt)
        assert out.ciphertext == ref_ct
        assert out.tag == ref_tag[:8]


def test_ocb_round_trip_and_truncation():
    rng = random.Random(8)
    c = _aes()
    for _ in range(50):
        pt, nonce = rng.randbytes(rng.randint(1, 40)), rng.randbytes(12)
        long, short = modes.ocb_seal(c, nonce, pt, 8), modes.ocb_seal(c, nonce, pt, 4)
        assert short.tag == long.tag[:4] and short.ciphertext == long.ciphertext
        assert modes.ocb_open(c, nonce, long.ciphertext, long.tag) == (pt, VALID)


def test_ocb_errors():
    c = _aes()
    with pytest.raises(ValueError):
        modes.ocb_seal(c, bytes(4), b"", 8)
    with pytest.raises(ValueError):
        modes.ocb_seal(c, bytes(17), b"x", 8)
    with pytest.raises(ValueError):
        modes.ocb_seal(c, bytes(4), b"x", 6)
    assert modes.ocb_open(c, bytes(4), b"x", bytes(5)) == (None, FORGED)


# -- CCM / GCM ---------------------------------------------------------------

def test_ccm_matches_openssl():
    rng = random.Random(9)
    c = _aes()
    for tag_len in (4, 8):
        for n in (0, 1, 16, 29, 40):
            nonce, pt, aad = rng.randbytes(13), rng.randbytes(n), rng.randbytes(rng.choice((0, 5)))
            ref = AESCCM(KEY, tag_length=tag_len).encrypt(nonce, pt, aad or None)
            out = modes.ccm_seal(c, nonce, pt, tag_len, aad)
            assert out.ciphertext + out.tag == ref
            assert modes.ccm_open(c, nonce, out.ciphertext, out.tag, aad) == (pt, VALID)


def test_gcm_published_case_2():
    # key 0^128, iv 0^96, one zero block
    c = make_cipher("aes_size", bytes(16))
    led = CallLedger()
    out = modes.gcm_seal(c, bytes(12), bytes(16), tag_len=8, ledger=led)
    assert out.ciphertext.hex() == "0388dace60b6a392f328c2b971b2fe78"
    assert out.tag.hex() == "ab6e47d42cec13bd"
    assert led.encrypt_calls == 3 and led.decrypt_calls == 0


def test_gcm_matches_openssl():
    rng = random.Random(10)
    c = _aes()
    for iv_len in (12, 9, 16):
        for n in (0, 5, 16, 33):
            iv, pt, aad = rng.randbytes(iv_len), rng.randbytes(n), rng.randbytes(7)
            ref = AESGCM(KEY).encrypt(iv, pt, aad)
            out = modes.gcm_seal(c, iv, pt, aad, tag_len=8)
            assert out.ciphertext == ref[:-16] and out.tag == ref[-16:-8]
            led = CallLedger()
            assert modes.gcm_open(c, iv, out.ciphertext, out.tag, aad, led) == (pt, VALID)
            assert led.decrypt_calls == 0


def test_gcm_aad_is_authenticated():
    c = _aes()
    out = modes.gcm_seal(c, bytes(12), b"payload", b"header", 8)
    assert modes.gcm_open(c, bytes(12), out.ciphertext, out.tag, b"headex") == (None, FORGED)


def test_ghash_zero_key():
    assert modes.ghash(bytes(16), b"abc", bytes(range(40))) == bytes(16)


def test_128_bit_modes_reject_64_bit_cipher():
    c = make_cipher("xxtea_opt", bytes(16))
    with pytest.raises(ValueError):
        modes.ccm_seal(c, bytes(13), b"x", 8)
    with pytest.raises(ValueError):
        modes.gcm_seal(c, bytes(12), b"x")


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**128 - 1), st.integers(0, 2**128 - 1), st.integers(0, 2**128 - 1))
def test_gf128_field_laws(a, b, c):
    assert modes.gf128_mul(a, b) == modes.gf128_mul(b, a)
    assert modes.gf128_mul(a, b ^ c) == modes.gf128_mul(a, b) ^ modes.gf128_mul(a, c)


def test_gf_double_reduction():
    assert modes.gf_double(bytes.fromhex("8000000000000000")) == bytes.fromhex("000000000000001b")
    assert modes.gf_double(b"\x80" + bytes(15)) == bytes(15) + b"\x87"


# -- call-count laws ----------------------------------------------------------

@pytest.mark.parametrize("name", ["aes_speed", "aes_size", "xxtea_opt", "skipjack", "rc6"])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 8])
def test_call_count_laws(name, n):
    spec = cipher_spec(name)
    c = make_cipher(name, bytes(spec.key_bytes))
    b = spec.block_bytes
    msg = bytes(range(n * b))

    def calls(fn):
        led = CallLedger()
        fn(led)
        return led

    assert calls(lambda L: modes.cbc_encrypt(c, bytes(b), msg, L)).cipher_calls == n
    assert calls(lambda L: modes.cbc_mac(c, msg, 4, L)).cipher_calls == n + 1
    comp = calls(lambda L: modes.cbc_mac(c, modes.cbc_encrypt(c, bytes(b), msg, L), 8, L))
    assert comp.cipher_calls == 2 * n + 1
    ocb = calls(lambda L: modes.ocb_seal(c, bytes(4), msg, 8, L))
    assert ocb.cipher_calls == n + 2 and ocb.blocks_processed == n
    assert calls(lambda L: modes.ocb_open(c, bytes(4), msg, bytes(8), L)).cipher_calls == n + 2
    if n >= 2:
        assert comp.cipher_calls > ocb.cipher_calls
    if spec.block_bits == 128:
        ccm = calls(lambda L: modes.ccm_seal(c, bytes(13), msg, 8, ledger=L))
        assert ccm.cipher_calls == 2 * n + 2 > ocb.cipher_calls
        gcm = calls(lambda L: modes.gcm_seal(c, bytes(12), msg, tag_len=8, ledger=L))
        assert gcm.cipher_calls == n + 2 and gcm.decrypt_calls == 0


def test_ledger_addition():
    a = CallLedger("ocb", 3, 1, 2, 0)
    b = CallLedger("ocb", 1, 0, 1, 4)
    s = a + b
    assert (s.mode, s.encrypt_calls, s.decrypt_calls, s.blocks_processed, s.state_bytes) == ("ocb", 4, 1, 3, 4)
    assert (a + CallLedger("ccm")).mode == "ocb+ccm"


# -- AEAD integrity -----------------------------------------------------------

def _aead_suite(c):
    return {
        "ocb": (lambda n, p: modes.ocb_seal(c, n, p, 8), lambda n, ct, t: modes.ocb_open(c, n, ct, t)),
        "ccm": (lambda n, p: modes.ccm_seal(c, n, p, 8), lambda n, ct, t: modes.ccm_open(c, n, ct, t)),
        "gcm": (lambda n, p: modes.gcm_seal(c, n, p, tag_len=8), lambda n, ct, t: modes.gcm_open(c, n, ct, t)),
    }


def test_aead_no_false_accepts_or_rejects():
    rng = random.Random(12)
    c = _aes()
    trials = 0
    for name, (seal, open_) in _aead_suite(c).items():
        for _ in range(3334):
            nonce, pt = rng.randbytes(13 if name == "ccm" else 12), rng.randbytes(rng.randint(1, 29))
            out = seal(nonce, pt)
            assert open_(nonce, out.ciphertext, out.tag) == (pt, VALID)
            wire = bytearray(out.ciphertext + out.tag)
            bit = rng.randrange(8 * len(wire))
            wire[bit // 8] ^= 1 << (bit % 8)
            ct, tag = bytes(wire[:len(pt)]), bytes(wire[len(pt):])
            assert open_(nonce, ct, tag) == (None, FORGED), name
            trials += 1
    assert trials >= 10_000


def test_distinct_nonces_give_distinct_ciphertexts():
    c = _aes()
    pt = b"same plaintext, two nonces"
    for name, (seal, _) in _aead_suite(c).items():
        n1, n2 = bytes(12) + (b"\0" if name == "ccm" else b""), b"\1" + bytes(11) + (b"\0" if name == "ccm" else b"")
        assert seal(n1, pt).ciphertext != seal(n2, pt).ciphertext
    assert modes.cbc_encrypt(c, bytes(16), pt) != modes.cbc_encrypt(c, b"\1" + bytes(15), pt)
