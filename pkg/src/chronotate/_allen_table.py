"""Frozen composition table for the 13 interval relations.

Generated by scripts/regen_allen_table.py from a brute-force
enumeration of integer-endpoint intervals; do not edit by hand.
The test suite re-derives the table and asserts equality.
"""

RELATION_TAGS = (
    "before",
    "after",
    "meets",
    "met_by",
    "overlaps",
    "overlapped_by",
    "during",
    "contains",
    "starts",
    "started_by",
    "finishes",
    "finished_by",
    "equals",
)

# COMPOSITION_BITS[i][j]: bit k set iff RELATION_TAGS[k] is in the
# composition of RELATION_TAGS[i] with RELATION_TAGS[j].
COMPOSITION_BITS = (
    (0x0001, 0x1fff, 0x0001, 0x0155, 0x0001, 0x0155, 0x0155, 0x0001, 0x0001, 0x0001, 0x0155, 0x0001, 0x0001),
    (0x1fff, 0x0002, 0x046a, 0x0002, 0x046a, 0x0002, 0x046a, 0x0002, 0x046a, 0x0002, 0x0002, 0x0002, 0x0002),
    (0x0001, 0x02aa, 0x0001, 0x1c00, 0x0001, 0x0150, 0x0150, 0x0001, 0x0004, 0x0004, 0x0150, 0x0001, 0x0004),
    (0x0895, 0x0002, 0x1300, 0x0002, 0x0460, 0x0002, 0x0460, 0x0002, 0x0460, 0x0002, 0x0008, 0x0008, 0x0008),
    (0x0001, 0x02aa, 0x0001, 0x02a0, 0x0015, 0x1ff0, 0x0150, 0x0895, 0x0010, 0x0890, 0x0150, 0x0015, 0x0010),
    (0x0895, 0x0002, 0x0890, 0x0002, 0x1ff0, 0x002a, 0x0460, 0x02aa, 0x0460, 0x002a, 0x0020, 0x02a0, 0x0020),
    (0x0001, 0x0002, 0x0001, 0x0002, 0x0155, 0x046a, 0x0040, 0x1fff, 0x0040, 0x046a, 0x0040, 0x0155, 0x0040),
    (0x0895, 0x02aa, 0x0890, 0x02a0, 0x0890, 0x02a0, 0x1ff0, 0x0080, 0x0890, 0x0080, 0x02a0, 0x0080, 0x0080),
    (0x0001, 0x0002, 0x0001, 0x0008, 0x0015, 0x0460, 0x0040, 0x0895, 0x0100, 0x1300, 0x0040, 0x0015, 0x0100),
    (0x0895, 0x0002, 0x0890, 0x0008, 0x0890, 0x0020, 0x0460, 0x0080, 0x1300, 0x0200, 0x0020, 0x0080, 0x0200),
    (0x0001, 0x0002, 0x0004, 0x0002, 0x0150, 0x002a, 0x0040, 0x02aa, 0x0040, 0x002a, 0x0400, 0x1c00, 0x0400),
    (0x0001, 0x02aa, 0x0004, 0x02a0, 0x0010, 0x02a0, 0x0150, 0x0080, 0x0010, 0x0080, 0x1c00, 0x0800, 0x0800),
    (0x0001, 0x0002, 0x0004, 0x0008, 0x0010, 0x0020, 0x0040, 0x0080, 0x0100, 0x0200, 0x0400, 0x0800, 0x1000),
)
