from helpers import chain_of
from SkewHopf.jobs import job_basis, job_confluence, job_hopf, job_report
from SkewHopf.jobs.config import configuration
from SkewHopf.lib.pool import map_chunks, split_parameters
from SkewHopf.lib.rewrite import check_confluence, derive_rules

def test_split_parameters_preserves_order():
    chunks = split_parameters(list(range(7)), 3)
    assert chunks == [[0, 1, 2], [3, 4, 5], [6]]
    assert split_parameters([1], 3) == [[1], [], []]
    assert split_parameters([], 2) == [[], []]

def test_map_chunks_in_process():
    assert map_chunks(sum, [1, 2, 3], 1) == [6]
    assert map_chunks(sum, [], 4) == []

def test_parallel_confluence_matches_serial():
    rules = derive_rules(chain_of('needge2', n=2))
    serial = check_confluence(rules)
    parallel = check_confluence(rules, parallel=2)
    assert parallel.to_json() == serial.to_json()

def test_job_modules_follow_the_protocol():
    for name, _ in configuration['jobs_to_run']:
        module = {'confluence': job_confluence, 'basis': job_basis, 'hopf': job_hopf, 'report': job_report}[name]
        assert hasattr(module, 'run_query') and hasattr(module, 'summarize_results')

def test_confluence_job():
    cases = [('free-matrix', {'n': 2, 'lo': 0, 'hi': 1}, True), ('needge2', {'n': 2}, False)]
    results = job_confluence.execute_job(job_confluence.run_query(cases))
    assert [r[2] for r in results] == [True, False]
    assert job_confluence.summarize_results([results, []])
    assert not job_confluence.summarize_results([[('needge2', {}, False, True)]])
    assert not job_confluence.summarize_results([None])

def test_basis_job():
    results = job_basis.execute_job([('free-matrix', {'n': 2, 'lo': 0, 'hi': 1}, 2)])
    assert [(counted, oracle) for _, _, _, counted, oracle in results] == [(1, 1), (9, 9), (65, 65)]
    assert job_basis.summarize_results([results])

def test_hopf_job():
    results = job_hopf.execute_job([('collapse-m4', {'lo': -1, 'hi': 1})])
    assert results == [('collapse-m4', {'lo': -1, 'hi': 1}, [], True)]
    assert job_hopf.summarize_results([results])

def test_report_job():
    results = job_report.execute_job(job_report.run_query([('growth', {'k': 3})]))
    assert results == [('growth', {'k': 3}, True, True)]
    assert job_report.summarize_results([results, None]) is False
