# Build the 13-variable cardiovascular-risk network and ask it questions.
#
# The bundled fixture carries the expert-agreed structure over sex, age,
# education, socioeconomic status, BMI, physical activity, sleep, smoking,
# anxiety, depression, hypertension, hypercholesterolemia and diabetes.
# Only the sleep-by-age table holds real probabilities; the other tables
# are uniform placeholders, flagged in the document notes.

import riskbn

net = riskbn.cvd_fixture()

print("variables:")
for v in net.variables:
    print(f"  {v.id:<4} {v.label:<22} states: {', '.join(v.states)}")

print("\nparent sets (the factorization of the joint):")
for var in net.variable_ids:
    parents = net.dag.parents_of(var)
    cond = f" | {', '.join(parents)}" if parents else ""
    print(f"  p({var}{cond})")

# Exact conditional query: how common is short sleep in the oldest group?
result = riskbn.query_conditional(net, {"v2": "(64-74]"}, {"v7": "<6h"})
print(f"\nP(sleep < 6h | age 64-74) = {result.probability:.4f}")

# The same number by brute-force enumeration over all completions --
# exponential, but the ground truth the elimination engine is held to.
oracle = riskbn.enumerate_query(net, {"v2": "(64-74]"}, {"v7": "<6h"})
print(f"same, by total-probability enumeration = {oracle.probability:.4f}")

# Evidence can be a set of states ("age above 44" as a disjunction):
older = ["(44-54]", "(54-64]", "(64-74]"]
result = riskbn.query_conditional(net, {"v2": older}, {"v7": "<6h"})
print(f"P(sleep < 6h | age > 44)   = {result.probability:.4f}")

# Posterior marginals for every variable given the evidence.
marginals = riskbn.posterior_marginals(net, {"v2": "(64-74]"})
print("\nsleep distribution given age 64-74:")
for state, p in zip(net.variable("v7").states, marginals["v7"]):
    print(f"  {state:<7} {100 * p:6.2f}%")

# Networks round-trip through a canonical JSON document byte-for-byte.
text = riskbn.serialize_network(net)
assert riskbn.parse_network(text) == net
print(f"\nserialized document: {len(text)} bytes, round-trips exactly")
