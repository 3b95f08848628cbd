#!/usr/bin/env python3
"""Builds the Tokyo rainfall day-of-year counts from NOAA GHCN-Daily.

Downloads the daily record for the Tokyo station (GHCN id JA000047662),
keeps 1951-1989, marks a day as rainy when precipitation exceeds 1 mm
(PRCP is stored in tenths of a millimetre), and counts rainy years per day
of year.  Day 60 (Feb 29) exists in 10 of those years; every other day in
39.  Output columns: day,y,m.
"""

import argparse
import csv
import io
import urllib.request

STATION = "JA000047662"
URL = (
    "https://www.ncei.noaa.gov/data/global-historical-climatology-network-daily/"
    f"access/{STATION}.csv"
)
FIRST_YEAR, LAST_YEAR = 1951, 1989


def day_of_year(year: int, month: int, day: int) -> int:
    # day-of-year in a leap-year calendar (Feb 29 = 60), so that a given
    # calendar date always maps to the same index
    lengths = [31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31]
    return sum(lengths[: month - 1]) + day


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data/tokyo_rainfall.csv")
    ap.add_argument("--url", default=URL)
    args = ap.parse_args()

    print(f"downloading {args.url} ...")
    raw = urllib.request.urlopen(args.url).read().decode("utf-8", "replace")

    rainy = {d: 0 for d in range(1, 367)}
    seen = {d: 0 for d in range(1, 367)}
    for row in csv.DictReader(io.StringIO(raw)):
        date = row["DATE"]  # YYYY-MM-DD
        year, month, day = int(date[0:4]), int(date[5:7]), int(date[8:10])
        if not FIRST_YEAR <= year <= LAST_YEAR:
            continue
        prcp = row.get("PRCP", "")
        if prcp in ("", None):
            continue
        doy = day_of_year(year, month, day)
        seen[doy] += 1
        if float(prcp) > 10.0:  # tenths of mm; > 1 mm
            rainy[doy] += 1

    with open(args.out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["day", "y", "m"])
        for d in range(1, 367):
            m = 10 if d == 60 else 39
            if seen[d] != m:
                print(f"warning: day {d} observed in {seen[d]} years, expected {m}")
            w.writerow([d, rainy[d], m])
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
