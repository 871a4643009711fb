import struct
import zlib
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
import sympy

import primon.primes as primes_module
from primon.errors import CacheFormatError, DomainError, ResourceLimitError
from primon.primes import (
    CACHE_MAGIC,
    PREFIX_CACHE_SIZE,
    is_prime,
    load_table,
    log_primorial,
    nth_prime,
    prime_count,
    primes_upto,
    primorial_exact,
    primorial_magnitude,
    save_table,
    sieve_first,
    table_covering,
)
from primon.utils.summation import set_workers
from mpmath import mp


def test_first_primes():
    assert primes_upto(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_upto(1).tolist() == []
    assert primes_upto(2).tolist() == [2]


def test_segment_boundaries_do_not_change_the_result():
    whole = primes_upto(100_000)
    tiny = primes_upto(100_000, segment_size=1000)
    assert np.array_equal(whole, tiny)
    assert whole.shape[0] == 9592


def test_sieve_matches_sympy():
    assert primes_upto(20_000).tolist() == list(sympy.primerange(2, 20_001))


def test_counts_and_nth_prime(table):
    assert table.count == 10_000
    assert table.largest == 104_729
    assert nth_prime(1) == 2
    assert nth_prime(1000, table) == 7919
    assert prime_count(100) == 25
    assert prime_count(10**6) == 78_498
    assert prime_count(7919, table) == 1000
    assert prime_count(1) == 0


def test_theta_prefix_is_log_primorial(small_table):
    for q in (1, 2, 5, 10, 20):
        assert abs(log_primorial(q, small_table) - mp.log(primorial_exact(q))) < mp.mpf(
            "1e-30"
        )
    assert small_table.theta(10) == small_table.theta_prefix[3]
    assert small_table.theta(1) == 0


def test_primorial_exact_n10():
    assert primorial_exact(10) == 6_469_693_230


def test_primorial_magnitude(table):
    mantissa, exponent = primorial_magnitude(10, table)
    assert exponent == 9
    assert abs(mantissa - mp.mpf("6.46969323")) < mp.mpf("1e-8")
    mantissa, exponent = primorial_magnitude(10_000, table)
    assert exponent == 45_336
    assert 9.0 <= mantissa < 9.2


def test_covers_uses_the_next_prime(small_table):
    # 7919 is p_1000 and 7927 is p_1001
    assert small_table.covers(7926)
    assert not small_table.covers(7927)
    with pytest.raises(ResourceLimitError):
        small_table.index_upto(8000)
    with pytest.raises(ResourceLimitError):
        small_table.require_index(1001)


def test_table_covering_reaches_x():
    t = table_covering(1000)
    assert t.largest >= 1000
    assert t.index_upto(1000) == 168


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    assert not is_prime(3_215_031_751)  # strong pseudoprime to bases 2, 3, 5, 7
    assert is_prime(18_446_744_073_709_551_557)  # largest prime below 2^64


def test_sieve_rejects_bad_requests():
    with pytest.raises(DomainError):
        sieve_first(0)
    with pytest.raises(ResourceLimitError):
        sieve_first(1000, cap=100)


def test_worker_count_does_not_change_the_table():
    try:
        set_workers(1)
        one = sieve_first(3000, segment_size=1024)
        set_workers(4)
        four = sieve_first(3000, segment_size=1024)
    finally:
        set_workers(1)
    assert one.checksum() == four.checksum()
    assert one.theta_prefix == four.theta_prefix


def test_cache_roundtrip(tmp_path, small_table):
    path = tmp_path / "nested" / "primes.bin"
    save_table(small_table, path)
    data = path.read_bytes()
    assert data[:4] == CACHE_MAGIC
    assert len(data) == 16 + 16 * 1000 + 4
    loaded = load_table(path)
    assert np.array_equal(loaded.primes, small_table.primes)
    assert loaded.checksum() == small_table.checksum()
    assert loaded.theta_prefix[-1] == small_table.theta_prefix[-1]


def test_cache_rejects_corruption(tmp_path, small_table):
    path = tmp_path / "primes.bin"
    save_table(small_table, path)
    data = bytearray(path.read_bytes())

    data[40] ^= 0xFF
    path.write_bytes(bytes(data))
    with pytest.raises(CacheFormatError, match="checksum"):
        load_table(path)

    path.write_bytes(b"XXXX" + bytes(data[4:]))
    with pytest.raises(CacheFormatError, match="magic"):
        load_table(path)

    path.write_bytes(bytes(data[:100]))
    with pytest.raises(CacheFormatError):
        load_table(path)


def test_cache_crc_covers_header_and_body(tmp_path, small_table):
    path = tmp_path / "primes.bin"
    save_table(small_table, path)
    data = path.read_bytes()
    assert zlib.crc32(data[:-4]) == int.from_bytes(data[-4:], "little")


def test_nth_prime_small_values():
    assert nth_prime(100) == 541
    assert nth_prime(25) == 97


def test_uncached_lookups_respect_the_sieve_cap(monkeypatch):
    def no_sieve(*args, **kwargs):
        raise AssertionError("sieve must not run past the cap")

    monkeypatch.setattr(primes_module, "primes_upto", no_sieve)
    with pytest.raises(ResourceLimitError):
        nth_prime(10**8 + 1)
    with pytest.raises(ResourceLimitError):
        nth_prime(101, cap=100)
    with pytest.raises(ResourceLimitError):
        prime_count(10**10)
    with pytest.raises(ResourceLimitError):
        prime_count(1000, cap=10)
    with pytest.raises(ResourceLimitError):
        table_covering(10**10)


def test_table_answers_before_the_cap(small_table):
    assert nth_prime(1000, small_table, cap=10) == 7919
    assert prime_count(7919, small_table, cap=10) == 1000


def test_theta_over_x_tends_to_one(table):
    distances = [1 - table.theta(x) / x for x in (10**3, 10**4, 10**5)]
    assert all(d > 0 for d in distances)
    assert distances[0] > distances[1] > distances[2]
    assert distances[2] < mp.mpf("0.004")


def test_theta_matches_exact_primorials_up_to_200(small_table):
    for q in range(1, 201):
        exact = mp.log(primorial_exact(q))
        assert abs(log_primorial(q, small_table) - exact) < mp.mpf("1e-30")
    with pytest.raises(DomainError):
        primorial_exact(201)


def test_cache_with_no_primes_is_rejected(tmp_path):
    path = tmp_path / "empty.bin"
    header = struct.pack("<4sIQ", CACHE_MAGIC, 1, 0)
    path.write_bytes(header + (zlib.crc32(header) & 0xFFFFFFFF).to_bytes(4, "little"))
    with pytest.raises(CacheFormatError, match="no primes"):
        load_table(path)


def test_prefix_cache_is_bounded():
    fresh = sieve_first(50)
    for k in range(PREFIX_CACHE_SIZE + 5):
        fresh.prefix_sums(f"power:{k}", lambda p, lp, k=k: mp.exp(-(k + 2) * lp))
    assert len(fresh._prefix_cache) == PREFIX_CACHE_SIZE
    assert ("power:0", mp.prec) not in fresh._prefix_cache
    assert (f"power:{PREFIX_CACHE_SIZE + 4}", mp.prec) in fresh._prefix_cache


def test_prefix_sums_from_many_threads_agree():
    fresh = sieve_first(5000)
    calls = []

    def term(p, lp):
        calls.append(p)
        return mp.exp(-lp)

    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(lambda _: fresh.prefix_sums("inverse", term), range(16)))
    assert all(r is results[0] for r in results)
    # computed once, not once per racing thread
    assert len(calls) == 5000
    assert mp.prec == 128
