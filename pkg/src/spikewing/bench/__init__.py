from .macs import MacCounts, count_macs
from .latency import BenchReport, bench_latency, write_bench_csv

__all__ = ["MacCounts", "count_macs", "BenchReport", "bench_latency",
           "write_bench_csv"]
