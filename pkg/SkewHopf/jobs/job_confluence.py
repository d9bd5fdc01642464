'''
Checks which chains resolve every ambiguity of the derived rules. Free matrix
chains do; chains with a singleton supremum class do not, and neither do the
block-triangular chains collapse-m4 and growth (see DESIGN.md).

Configured as such:
'cases':
    A list of (preset name, preset parameters, expected confluence).
'''
from logging import getLogger
from SkewHopf.lib.chain import preset, validate
from SkewHopf.lib.logger import LOGGER_NAME
from SkewHopf.lib.rewrite import check_confluence, derive_rules

def run_query(cases=None):
    return list(cases or [])

def execute_job(query_data):
    results = []
    for name, params, expected in query_data:
        chain = validate(preset(name, **params))
        report = check_confluence(derive_rules(chain))
        getLogger(LOGGER_NAME).info(f'{name} {params}: {report.resolved}/{report.total} ambiguities resolve')
        results.append((name, params, report.confluent, expected))
    return results

def summarize_results(results):
    ok = True
    for chunk in results:
        if chunk is None: # the sub job crashed and logged it
            ok = False
            continue
        for name, params, confluent, expected in chunk:
            if confluent != expected:
                getLogger(LOGGER_NAME).error(f'{name} {params}: confluent={confluent}, expected {expected}')
                ok = False
    return ok
