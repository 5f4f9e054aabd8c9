"""Regenerates sample_reports.csv, the raw-ingest sample bundled with the tests."""
import random

rng = random.Random(20150223)
locs = ["Boylston Street", "Main Street", "Cambridge St, Boston"]
types = ["Jam", "Accident", "Hazard", "RoadClosure"]
hour_w = [2, 3, 6, 8, 9, 7, 5, 4, 3, 2, 2, 3, 4, 5, 6, 9, 10, 9, 7, 6, 5, 4, 3, 2]
rows = []
for u in range(80):
    uid = f"user{u:03d}"
    rate = rng.lognormvariate(1.0, 0.6)
    for day in range(28):
        if rng.random() < rate / 7:
            for _ in range(1 + (rng.random() < 0.3)):
                hour = rng.choices(range(24), hour_w)[0]
                minute = rng.randrange(60)
                d = 23 + day
                month, dd = (2, d) if d <= 28 else (3, d - 28)
                ts = f"2015-{month:02d}-{dd:02d}T{hour:02d}:{minute:02d}:00Z"
                rows.append((ts, uid, rng.choice(locs), rng.choices(types, [5, 2, 2, 1])[0]))
rows.sort()
with open("sample_reports.csv", "w", newline="\n") as f:
    f.write("timestamp,sourceId,loc,incidentType,extra\n")
    for ts, uid, loc, t in rows:
        loc_field = f'"{loc}"' if "," in loc else loc
        f.write(f"{ts},{uid},{loc_field},{t},x\n")
    f.write("not-a-date,user999,Main Street,Jam,x\n")
    f.write("2015-03-01T10:00:00Z,,Main Street,Jam,x\n")
