from mpmath import mp

from primon.config import RunConfig
from primon.numeric import get_quadrature
from primon.session import Session
from primon.utils.summation import get_workers


def test_session_applies_and_restores_settings():
    before = (mp.prec, get_workers(), get_quadrature())
    with Session(RunConfig(precision_bits=200, thread_count=3, quadrature_tolerance=1e-30)):
        assert mp.prec == 200
        assert get_workers() == 3
        assert get_quadrature().tolerance == 1e-30
    assert (mp.prec, get_workers(), get_quadrature()) == before


def test_session_reuses_the_cache(tmp_path):
    cache = tmp_path / "primes.bin"
    with Session(RunConfig(prime_cache_path=cache)) as session:
        built = session.prime_table(300)
        assert session.prime_table(100) is built
    assert cache.exists()
    with Session(RunConfig(prime_cache_path=cache)) as session:
        loaded = session.prime_table(250)
        assert loaded.count == 300
        assert loaded.checksum() == built.checksum()
        assert session.provenance().prime_table_checksum == built.checksum()


def test_session_grows_a_small_cache(tmp_path):
    cache = tmp_path / "primes.bin"
    with Session(RunConfig(prime_cache_path=cache)) as session:
        session.prime_table(50)
    with Session(RunConfig(prime_cache_path=cache)) as session:
        assert session.prime_table(80).count == 80
        assert session.table_covering(1000).largest >= 1000
