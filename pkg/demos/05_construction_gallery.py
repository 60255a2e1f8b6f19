"""The certified construction gallery end to end: build, check, report.

Each tag packages one operator family together with the claims it certifies
(unit norm, the attainment set, distance constants, modulus bounds).  The
harness runs every claim at pinned tolerances and emits JSON/CSV reports.

Run:  python3 demos/05_construction_gallery.py
"""

from normlab import GALLERY_INFO, gallery_default_cases, reproduce, run_all

# --- what is in the gallery ---------------------------------------------------

print("gallery tags and the claims they certify:\n")
for tag, info in GALLERY_INFO.items():
    print(f"  {tag:<12} params {info['params']}")
    print(f"               {info['claim']}")

# --- a single harness, in detail ------------------------------------------------

rep = reproduce("DIAG-P-Q", {"beta": 0.5, "p": 1.5, "q": 3.0})
print(f"\nDIAG-P-Q at beta=0.5, p=1.5, q=3 -> overall {'PASS' if rep.overall else 'FAIL'}")
for c in rep.checks:
    mark = "ok " if c.passed else ("--" if c.kind == "diagnostic" else "XX")
    print(f"  [{mark}] {c.name:<40} expected {c.expected!r:<24} computed {c.computed!r}")

# --- a refusal outside the hypothesis range --------------------------------------

try:
    reproduce("ROT-2-Q", {"beta": 1.0, "q": 2.0})
except ValueError as exc:
    print(f"\nrefused outside the hypothesis range: {exc}")

# --- the default bundle -----------------------------------------------------------

print(f"\ndefault bundle: {len(gallery_default_cases())} parameter cases; running...")
reports = run_all(seed=0, out_dir="reports")
ok = sum(r.overall for r in reports)
print(f"  {ok}/{len(reports)} reports pass; written to reports/<tag>.json and reports/index.csv")
worst = max(reports, key=lambda r: r.worst_residual)
print(f"  worst residual {worst.worst_residual:.2e} ({worst.tag} {worst.params})")
