"""The three Boolean reasoning modes side by side on random sentences.

A stronger mode can settle a partial sample that a weaker one leaves open,
so it may need fewer samples; it also spends more time per sample.  On small
random inputs the difference is modest.
"""
import random
import time

from calcqe import EngineConfig, check_truth, prepare
from calcqe.oracle import random_sentence

rng = random.Random(3)
problems = [prepare(random_sentence(rng, max_vars=3, max_atoms=5)) for _ in range(120)]

print(f"{'mode':<10}{'decided':>8}{'samples':>9}{'implicants used/generated':>28}{'seconds':>9}")
for mode in ("eval", "propagate", "explore"):
    start = time.perf_counter()
    decided = samples = used = generated = 0
    for p in problems:
        r = check_truth(p, EngineConfig(boolean_mode=mode))
        decided += r.result.value != "unknown"
        samples += r.stats.samples_tried
        used += r.stats.implicants_used
        generated += r.stats.implicants_generated
    elapsed = time.perf_counter() - start
    print(f"{mode:<10}{decided:>8}{samples:>9}{f'{used}/{generated}':>28}{elapsed:>9.2f}")
