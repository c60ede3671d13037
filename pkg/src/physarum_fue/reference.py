"""Published reference results for the bundled fixtures.

Values are recorded as printed; they are comparison data, not computed.
Link keys use the fixture's stored ``(i, j)`` orientation.
"""

RAMAZANI_LINKS = [(1, 2), (1, 3), (2, 3), (2, 4), (1, 4), (3, 4)]

RAMAZANI_FLOWS = {
    "FITA": dict(zip(RAMAZANI_LINKS, [287, 217, 0, 287, 196, 217])),
    "PA": dict(zip(RAMAZANI_LINKS, [306, 227, 0, 306, 167, 227])),
}

# crisp path values under two external defuzzification methods
RAMAZANI_PATH_VALUES = {
    "hassanzadeh": {
        "FITA": {(1, 2, 4): 50.48, (1, 4): 55.39, (1, 3, 4): 51.85},
        "PA": {(1, 2, 4): 55.16, (1, 4): 54.62, (1, 3, 4): 54.64},
    },
    "deng": {
        "FITA": {(1, 2, 4): 15.72, (1, 4): 17.50, (1, 3, 4): 16.19},
        "PA": {(1, 2, 4): 17.10, (1, 4): 17.26, (1, 3, 4): 17.02},
    },
}

GHATEE_FLOWS = {
    (1, 3): 400.00, (3, 4): 0.00, (4, 6): 0.00, (5, 6): 450.00, (6, 7): 300.00,
    (3, 7): 353.67, (2, 3): 46.33, (2, 8): 46.33, (8, 9): 250.00, (8, 10): 350.00,
    (7, 8): 553.67, (7, 11): 100.00, (6, 12): 150.00, (11, 12): 150.00, (11, 13): 250.00,
}

# (od, node sequence) -> (fuzzy cost triplet, Deng's crisp value)
GHATEE_PATH_COSTS = {
    ((1, 9), (1, 3, 2, 8, 9)): ((61.2985, 64.6115, 70.6359), 65.0634),
    ((1, 9), (1, 3, 7, 8, 9)): ((56.1930, 63.6782, 77.2894), 64.6992),
    ((1, 10), (1, 3, 2, 8, 10)): ((53.1721, 56.3030, 61.9963), 56.7301),
    ((1, 10), (1, 3, 7, 8, 10)): ((48.0666, 55.3697, 68.6498), 56.3659),
    ((1, 13), (1, 3, 7, 11, 13)): ((58.8174, 62.8783, 70.2628), 63.4322),
    ((5, 9), (5, 6, 7, 8, 9)): ((118.2751, 209.4803, 375.3303), 221.9211),
    ((5, 10), (5, 6, 7, 8, 10)): ((110.1488, 201.1718, 366.6906), 213.5878),
    ((5, 13), (5, 6, 12, 11, 13)): ((120.7787, 208.3855, 366.6922), 220.3355),
    ((5, 13), (5, 6, 7, 11, 13)): ((120.8995, 208.6804, 368.3037), 220.6541),
}

# right limit as printed is 1.0 below what the printed flows give
GHATEE_MISPRINTED = ((5, 13), (5, 6, 12, 11, 13))

FUZZY_SPREAD = 0.2
