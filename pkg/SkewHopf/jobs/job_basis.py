'''
Compares the cumulative reduced-word count with the dimension computed by linear algebra.

Configured as such:
'cases':
    A list of (preset name, preset parameters, maximal word length).
'''
from logging import getLogger
from SkewHopf.lib.chain import preset, validate
from SkewHopf.lib.logger import LOGGER_NAME
from SkewHopf.lib.rewrite import count_reduced_words, derive_rules, oracle_dimension

def run_query(cases=None):
    return list(cases or [])

def execute_job(query_data):
    results = []
    for name, params, max_len in query_data:
        chain = validate(preset(name, **params))
        rules = derive_rules(chain)
        for n in range(max_len + 1):
            counted = sum(count_reduced_words(rules, n))
            results.append((name, params, n, counted, oracle_dimension(chain, n, rules)))
    return results

def summarize_results(results):
    ok = True
    for chunk in results:
        if chunk is None:
            ok = False
            continue
        for name, params, n, counted, oracle in chunk:
            getLogger(LOGGER_NAME).info(f'{name} {params} up to length {n}: {counted} reduced words, oracle {oracle}')
            ok = ok and counted == oracle
    return ok
