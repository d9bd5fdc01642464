'''
Runs the Hopf axiom suite and the generator injectivity check on every generator of each chain.

Configured as such:
'cases':
    A list of (preset name, preset parameters).
'''
from logging import getLogger
from SkewHopf.lib.chain import preset, validate
from SkewHopf.lib.hopf import hopf_axioms
from SkewHopf.lib.logger import LOGGER_NAME
from SkewHopf.lib.ncpoly import NCPoly
from SkewHopf.lib.rewrite import derive_rules

def run_query(cases=None):
    return list(cases or [])

def execute_job(query_data):
    results = []
    for name, params in query_data:
        chain = validate(preset(name, **params))
        rules = derive_rules(chain)
        report = hopf_axioms(chain, rules)
        letters = chain.letters()
        forms = {rules.normal_form(NCPoly.from_letter(l)) for l in letters}
        injective = len(forms) == len(letters) and all(NCPoly.from_letter(l) in forms for l in letters)
        results.append((name, params, report.failures, injective))
    return results

def summarize_results(results):
    ok = True
    for chunk in results:
        if chunk is None:
            ok = False
            continue
        for name, params, failures, injective in chunk:
            for failure in failures:
                getLogger(LOGGER_NAME).error(f'{name} {params}: {failure}')
            if not injective:
                getLogger(LOGGER_NAME).error(f'{name} {params}: generators are not in normal form')
            ok = ok and not failures and injective
    return ok
