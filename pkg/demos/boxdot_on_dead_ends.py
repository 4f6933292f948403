"""
When boxdot and box disagree
============================

For downward-closed phi, boxdot phi and box phi agree on every team whose
worlds all have successors.  When a world of the team has no successor
there is no covering successor team, so boxdot phi is vacuously true while
box phi still looks at the (smaller) image.
"""

import random

from teamcheck import Box, BoxDot, KripkeModel, check_reference, parse_formula, render_formula
from teamcheck.batch import ModelSpace
from teamcheck.sampling import random_negation_free

phi = parse_formula("dia p")
m = KripkeModel(["a", "b"], [("a", "b")], {})
team = m.team("a,b")
print("boxdot dia p:", check_reference(m, team, BoxDot(phi)).value)
print("box dia p:   ", check_reference(m, team, Box(phi)).value)

# count disagreements over every 3-world model, with and without dead ends
everything = ModelSpace(3, ["p", "q"])
serial = ModelSpace.serial(3, ["p", "q"])
rng = random.Random(0)
for _ in range(5):
    f = random_negation_free(rng, 3)
    a = everything.count_disagreements(BoxDot(f), Box(f))
    b = serial.count_disagreements(BoxDot(f), Box(f))
    print(f"{render_formula(f):40} all models {a[0]:6}/{a[1]}  serial {b[0]}/{b[1]}")
