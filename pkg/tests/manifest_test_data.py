# test data

JOB_FILTRATION = {
    "command": "filtration",
    "group": "D4",
    "p": 2,
    "kind": "lower-central",
    "upto": 3
}

JOB_TRANSFER = {
    "command": "transfer-check",
    "group": "D4",
    "family": "lower-central:2:2",
    "subgroups": ["center"],
    "budgets": {"budget_prefixes": 100000}
}

JOB_LYNDON = {
    "command": "lyndon",
    "k": 2,
    "n": 4
}

MANIFEST_JSON_DICT_1 = {
    "budgets": {"cap_order": 4096, "seed": 7},
    "jobs": [JOB_FILTRATION, JOB_TRANSFER, JOB_LYNDON]
}

# (job, error match)
BAD_JOBS = [
    ({"group": "D4"}, "must be an object with a command"),
    ({"command": "frobnicate"}, "Unknown command"),
    ({"command": "h2"}, "needs a group"),
    ({"command": "pairings", "group": "D4"}, "needs a family"),
    ({"command": "h2", "group": "D4", "subgroups": "center"}, "list of spec strings"),
    ({"command": "h2", "group": "D4", "budgets": {"cap_order": 0}}, "Invalid budgets"),
    ({"command": "h2", "group": "D4", "budgets": {"tries": 3}}, "Invalid budgets"),
]
