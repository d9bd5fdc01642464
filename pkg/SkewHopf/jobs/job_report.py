'''
Reproduces the comodule lattice and growth experiments for each chain.

Configured as such:
'cases':
    A list of (preset name, preset parameters).
'''
from logging import getLogger
from SkewHopf.lib.chain import preset, validate
from SkewHopf.lib.comodule import theorem_a_report, theorem_b_report
from SkewHopf.lib.logger import LOGGER_NAME

def run_query(cases=None):
    return list(cases or [])

def execute_job(query_data):
    results = []
    for name, params in query_data:
        chain = validate(preset(name, **params))
        lattices = theorem_a_report(chain)
        growth, cyclic = theorem_b_report(chain)
        getLogger(LOGGER_NAME).info(f'{name} {params}: min simple dims {growth.dims}, {growth.verdict}')
        results.append((name, params, lattices.ok, cyclic.ok))
    return results

def summarize_results(results):
    ok = True
    for chunk in results:
        if chunk is None:
            ok = False
            continue
        for name, params, lattices_ok, cyclic_ok in chunk:
            if not lattices_ok:
                getLogger(LOGGER_NAME).error(f'{name} {params}: lattice mismatch')
            if not cyclic_ok:
                getLogger(LOGGER_NAME).error(f'{name} {params}: cyclic module below the block bound')
            ok = ok and lattices_ok and cyclic_ok
    return ok
