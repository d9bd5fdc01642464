'''
Batch experiments run by run_jobs.py. Each entry is (name, config) where name
selects SkewHopf/jobs/job_<name>.py; see SkewHopf/lib/pool.py for the meaning of
'args', 'run_async', 'async_cores' and 'iterations'.
'''
configuration = {
    'jobs_to_run': [
        ('confluence', {
            'args': {'cases': [ # (preset, params, expected to be confluent)
                ('free-matrix', {'n': 2, 'lo': 0, 'hi': 2}, True),
                ('free-matrix', {'n': 3, 'lo': 0, 'hi': 2}, True),
                ('collapse-m4', {'lo': -1, 'hi': 1}, False),
                ('growth', {'k': 3}, False),
                ('needge2', {'n': 2, 'lo': -1, 'hi': 1}, False)
            ]},
            'run_async': True,
            'async_cores': 2
        }),
        ('basis', {
            'args': {'cases': [ # (preset, params, max word length)
                ('free-matrix', {'n': 2, 'lo': 0, 'hi': 1}, 2),
                ('collapse-m4', {'lo': -1, 'hi': 0}, 2)
            ]}
        }),
        ('hopf', {
            'args': {'cases': [
                ('free-matrix', {'n': 2, 'lo': 0, 'hi': 2}),
                ('collapse-m4', {'lo': -1, 'hi': 1}),
                ('needge2', {'n': 3, 'lo': -1, 'hi': 1}),
                ('growth', {'k': 2})
            ]},
            'run_async': True,
            'async_cores': 2
        }),
        ('report', {
            'args': {'cases': [
                ('collapse-m4', {'lo': -1, 'hi': 1}),
                ('growth', {'k': 3})
            ]}
        })
    ]
}
