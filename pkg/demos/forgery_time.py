"""
How long does MAC forgery take?
===============================

Brute-force forgery time for a given MAC length when every attempt costs
one full packet on the air, evaluated exactly and with the attempt rate
rounded up to a multiple of 40 per second.
"""

from linksec.ciphers import key_horizon
from linksec.policy import forgery_attempts_per_second, forgery_days, forgery_days_rounded

packet = 68
for bps in (19200, 250000):
    rate = forgery_attempts_per_second(packet, bps)
    print(f"{bps} bps: {rate:.1f} attempts/s")
    for bits in (16, 24, 32, 64):
        print(f"  {bits:>2}-bit MAC  exact {forgery_days(bits, packet, bps):>14.2f} days"
              f"   rounded rate {forgery_days_rounded(bits, packet, bps):>14.2f} days")

# key length against the year it stops being comfortably safe
for bits in (56, 64, 80, 128):
    print(f"{bits}-bit key: safe until about {key_horizon(bits)}")
