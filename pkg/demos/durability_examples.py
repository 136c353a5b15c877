"""Two mechanisms that separate durability from ex-post durability."""
from bayesbargain.durability import durability_report, summary_line
from bayesbargain.fixtures import fixture

for name in ("FIX-DUR-A", "FIX-DUR-B"):
    p, m = fixture(name)
    print(f"{name}: {summary_line(p, m)}")
    for check in durability_report(p, m):
        print(f"  {check.name}: {'holds' if check.holds else 'fails'}")
