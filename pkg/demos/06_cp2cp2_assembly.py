"""Gluing two projective planes along a fold and checking every overlap."""

from foldedtoric import assembly

example = assembly.build_cp2cp2_example()
for chart in example.charts:
    print(chart.name, chart.kind, "on", ", ".join(h.describe() for h in chart.region))
for ov in example.overlaps:
    print("overlap", ov.name, ov.charts)

report = assembly.verify_example(example, samples=2000)
for line in report.lines():
    print(line)

for r in report.overlap_reports:
    print(r.describe())
print("control:", report.control.describe())
