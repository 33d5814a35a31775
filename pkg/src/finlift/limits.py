"""Size caps. Every exhaustive routine consults these and raises rather than truncating."""

from dataclasses import dataclass


@dataclass
class Limits:
    labelled_max: int = 5          # enumerate_spaces(..., "labelled")
    iso_max: int = 6               # enumerate_spaces(..., "up_to_iso")
    map_count: int = 10**7         # cod.n ** dom.n before enumerating Hom
    square_count: int = 10**7      # |Hom(A,C)| * |Hom(B,D)| per lifting query
    product_points: int = 4096     # points in any explicitly built product
    power_points: int = 4096       # points of A^H in the retract-of-power test


limits = Limits()
