"""The quantized command-sequence codec: fixed slots, bounded error.

Each primitive becomes one 8-token command: the catalog slot of its model
ID, three position bins, three size bins, and a rotation bin. Lengths use
1500 bins of 3 mm (0-4500 mm); rotation uses 4 bins of 90 degrees.
Dequantization returns bin centers, so the worst-case length error is half
a bin: 1.5 mm. Model-specific parameters cannot be represented; decoding
restores schema defaults.
"""

import numpy as np

from cabinetkit import (
    SynthSpec,
    builtin_catalog,
    decode,
    dequantize_length,
    encode,
    format_commands,
    generate,
    iou3d,
    parse_commands,
    quantize_length,
    quantize_rotation,
)

catalog = builtin_catalog()

# Scalar quantization.
for v in (0.0, 1.4, 1500.0, 2997.0, 4497.0):
    b = quantize_length(v)
    back = dequantize_length(b)
    print(f"{v:8.1f} mm -> bin {b:4d} -> {back:8.1f} mm (error {abs(back - v):.2f})")

print("\nrotation bins:", [quantize_rotation(d) for d in (0, 45, 90, 179, 269, 315)])

# Encode a generated cabinet and inspect the wire format.
model = generate(SynthSpec(seed=8), catalog)
sequence = encode(model, catalog)
text = format_commands(sequence)
print(f"\n{len(model)} primitives -> {sequence.token_count} tokens "
      f"(8 per command + 2 sentinels)")
print("\n".join(text.splitlines()[:5]), "\n...")

# The textual form parses back exactly.
assert parse_commands(text) == sequence

# Decoding inverts the encoding up to quantization error. Boxes keep their
# identity; their coordinates move by at most 1.5 mm per axis.
decoded = decode(sequence, catalog)
assert [i.model_id for i in decoded.instances] == [i.model_id for i in model.instances]
worst = min(
    iou3d(a.box, b.box) for a, b in zip(model.instances, decoded.instances)
)
print(f"\nworst per-primitive IoU after decode: {worst:.4f}")
print("decoded base-box params (defaults):", decoded.instances[0].params)

# The round-trip error bound, measured:
rng = np.random.default_rng(0)
values = rng.uniform(0, 4497, 50_000)
errors = np.array([abs(dequantize_length(quantize_length(v)) - v) for v in values])
print(f"\nmax scalar round-trip error over 50k samples: {errors.max():.3f} mm (bound 1.5)")
