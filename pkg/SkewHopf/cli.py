'''
Command-line front end. Every verb reads a chain (a JSON spec file, or --preset
with --param k=v) and prints one JSON document on stdout, or a plain table with
--pretty. Exit codes: 0 success, 1 validation error, 2 computation error,
3 a requested check failed.
'''
from __future__ import annotations
import argparse
import json
import sys
from logging import getLogger
from typing import Any, Dict, List, Tuple
from SkewHopf.lib import chain as chains
from SkewHopf.lib import comodule, hopf, rewrite
from SkewHopf.lib.chain import ChainSpec, ValidatedChain
from SkewHopf.lib.expr import parse_expr
from SkewHopf.lib.logger import LOGGER_NAME, setup_logging
from SkewHopf.lib.ncpoly import NCPoly, SkewHopfException, ValidationException

EXIT_OK = 0
EXIT_CHECK_FAILED = 3
HOPF_OPS = ['comultiply', 'counit', 'antipode', 'convolution', 'axioms']

class UsageException(ValidationException):
    pass

class ArgumentParser(argparse.ArgumentParser):
    # usage errors exit like any other validation error
    def error(self, message):
        raise UsageException('BAD_USAGE', message)

def _params(pairs: List[str]) -> Dict[str, str]:
    res = {}
    for pair in pairs or []:
        if '=' not in pair:
            raise UsageException('BAD_USAGE', f'--param expects k=v, got {pair!r}')
        k, v = pair.split('=', 1)
        res[k.strip()] = v.strip()
    return res

def load_spec(args) -> ChainSpec:
    if args.preset:
        return chains.preset(args.preset, **_params(args.param))
    if not args.chain:
        raise UsageException('BAD_USAGE', 'give a chain spec file or --preset')
    return ChainSpec.load(args.chain)

def load_chain(args) -> ValidatedChain:
    return chains.validate(load_spec(args))

def _expr(args, chain: ValidatedChain) -> NCPoly:
    if args.expr is None:
        raise UsageException('BAD_USAGE', f'{args.verb} needs --expr')
    return parse_expr(args.expr, chain)

def _poly_json(p: NCPoly, rules: rewrite.RuleSet) -> dict:
    return {'text': p.text(rules.word_key), 'terms': p.to_json(rules.word_key)}

def cmd_validate(args) -> Tuple[Any, int]:
    chain = load_chain(args)
    parts, smallest = chain.sup_partition()
    violations = chain.check_invariants()
    return {
        'ok': not violations,
        'warnings': chain.warnings,
        'window': {'lo': chain.lo, 'hi': chain.hi},
        'blocks': [{'r': r, 'blocks': [list(b) for b in chain.blocks[r]]} for r in chain.levels],
        'letters': len(chain.letters()),
        'supPartition': parts,
        'minClassSize': smallest,
        'supOK': smallest >= 2,
        'violations': violations
    }, EXIT_OK if not violations else EXIT_CHECK_FAILED

def cmd_preset(args) -> Tuple[Any, int]:
    spec = chains.preset(args.name, **_params(args.param))
    chains.validate(spec)
    return spec.to_json(), EXIT_OK

def cmd_rules(args) -> Tuple[Any, int]:
    rules = rewrite.derive_rules(load_chain(args))
    return {'count': len(rules), 'rules': rules.to_json(), 'text': [str(r) for r in rules]}, EXIT_OK

def cmd_normalize(args) -> Tuple[Any, int]:
    chain = load_chain(args)
    p = _expr(args, chain)
    rules = rewrite.derive_rules(chain)
    return {'input': _poly_json(p, rules), 'normalForm': _poly_json(rewrite.normal_form(rules, p), rules)}, EXIT_OK

def cmd_confluence(args) -> Tuple[Any, int]:
    report = rewrite.check_confluence(rewrite.derive_rules(load_chain(args)), args.parallel)
    failed = args.assert_confluent and not report.confluent
    return report.to_json(), EXIT_CHECK_FAILED if failed else EXIT_OK

def cmd_complete(args) -> Tuple[Any, int]:
    res = rewrite.complete(rewrite.derive_rules(load_chain(args)), args.max_degree, args.max_iters)
    return res.to_json(), EXIT_OK

def cmd_basis_count(args) -> Tuple[Any, int]:
    chain = load_chain(args)
    rules = rewrite.derive_rules(chain)
    counts = rewrite.count_reduced_words(rules, args.max_len)
    res = {'maxLen': args.max_len, 'counts': counts, 'cumulative': sum(counts)}
    if not args.oracle:
        return res, EXIT_OK
    res['oracle'] = rewrite.oracle_dimension(chain, args.max_len, rules)
    res['match'] = res['oracle'] == res['cumulative']
    return res, EXIT_OK if res['match'] else EXIT_CHECK_FAILED

def cmd_oracle(args) -> Tuple[Any, int]:
    return {'maxLen': args.max_len, 'dimension': rewrite.oracle_dimension(load_chain(args), args.max_len)}, EXIT_OK

def _single_letter(p: NCPoly):
    support = p.support()
    if len(support) != 1 or len(support[0]) != 1 or p.coefficient(support[0]) != 1:
        raise UsageException('BAD_USAGE', f'expected a single letter, got {p}')
    return support[0][0]

def cmd_hopf(args) -> Tuple[Any, int]:
    chain = load_chain(args)
    rules = rewrite.derive_rules(chain)
    if args.op == 'axioms':
        report = hopf.hopf_axioms(chain, rules)
        return report.to_json(), EXIT_OK if report.ok else EXIT_CHECK_FAILED
    p = _expr(args, chain)
    if args.op == 'comultiply':
        delta = hopf.comultiply(rules, p)
        return {'input': _poly_json(p, rules), 'text': str(delta), 'terms': delta.to_json()}, EXIT_OK
    if args.op == 'counit':
        return {'input': _poly_json(p, rules), 'counit': str(hopf.counit(p))}, EXIT_OK
    if args.op == 'antipode':
        return {'input': _poly_json(p, rules), 'antipode': _poly_json(hopf.antipode(chain, rules, p), rules)}, EXIT_OK
    l = _single_letter(p)
    left, right = hopf.convolution_check(chain, rules, l.level, l.row, l.col)
    return {'letter': l.to_json(), 'left': left, 'right': right}, EXIT_OK if left and right else EXIT_CHECK_FAILED

def cmd_rank(args) -> Tuple[Any, int]:
    chain = load_chain(args)
    rules = rewrite.derive_rules(chain)
    p = rules.normal_form(_expr(args, chain))
    return {'normalForm': _poly_json(p, rules), 'rank': hopf.rank(p).to_json()}, EXIT_OK

def cmd_span_dim(args) -> Tuple[Any, int]:
    chain = load_chain(args)
    rules = rewrite.derive_rules(chain)
    p = rules.normal_form(_expr(args, chain))
    res = {'normalForm': _poly_json(p, rules), 'rightSpanDim': hopf.right_span_dim(rules, p)}
    if len(p) == 1:
        res['firstBlockBound'] = hopf.first_block_bound(chain, p.support()[0])
    return res, EXIT_OK

def cmd_coradical(args) -> Tuple[Any, int]:
    return hopf.asymptotic_coradical(load_chain(args)).to_json(), EXIT_OK

def _block_list(text: str or None) -> List[int] or None:
    if text is None:
        return None
    try:
        return [int(k) for k in text.split(',') if k.strip()]
    except ValueError:
        raise UsageException('BAD_USAGE', f'block numbers must be integers, got {text!r}')

def cmd_comodule(args) -> Tuple[Any, int]:
    chain = load_chain(args)
    s = comodule.natural_comodule(chain, args.level, args.component)
    if args.dual:
        s = comodule.dual_comodule(chain, s)
    res = s.to_json()
    if args.sub is not None:
        letters = comodule.coefficient_coalgebra(chain, s, _block_list(args.sub), _block_list(args.quotient))
        res['coefficientCoalgebra'] = [l.to_json() for l in letters]
    return res, EXIT_OK

def cmd_lattice(args) -> Tuple[Any, int]:
    chain = load_chain(args)
    lattice = comodule.submodule_lattice(chain, comodule.natural_comodule(chain, args.level, args.component))
    expected = comodule.expected_lattice(chain, args.level, args.component)
    match = lattice == expected
    return {
        'r': args.level,
        'blocks': [list(b) for b in lattice.blocks],
        'lattice': lattice.to_json(),
        'expected': expected.to_json(),
        'match': match
    }, EXIT_OK if match else EXIT_CHECK_FAILED

def cmd_report(args) -> Tuple[Any, int]:
    chain = load_chain(args)
    theorem_a = comodule.theorem_a_report(chain)
    growth, theorem_b = comodule.theorem_b_report(chain)
    ok = theorem_a.ok and theorem_b.ok
    return {'ok': ok, 'lattices': theorem_a.to_json(), 'growth': growth.to_json(), 'cyclicModules': theorem_b.to_json()}, \
        EXIT_OK if ok else EXIT_CHECK_FAILED

COMMANDS = {
    'validate': cmd_validate,
    'preset': cmd_preset,
    'rules': cmd_rules,
    'normalize': cmd_normalize,
    'confluence': cmd_confluence,
    'complete': cmd_complete,
    'basis-count': cmd_basis_count,
    'oracle': cmd_oracle,
    'hopf': cmd_hopf,
    'rank': cmd_rank,
    'span-dim': cmd_span_dim,
    'coradical': cmd_coradical,
    'comodule': cmd_comodule,
    'lattice': cmd_lattice,
    'report': cmd_report,
}

def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument('chain', nargs='?', help='chain spec JSON file')
    common.add_argument('--preset', metavar='NAME', help='use a named chain instead of a file')
    common.add_argument('--param', action='append', metavar='K=V', help='preset parameter, repeatable')
    common.add_argument('--pretty', action='store_true', help='plain text instead of JSON')
    common.add_argument('--verbose', action='store_true', help='debug logging on stderr')

    parser = ArgumentParser(prog='skewhopf', description='free Hopf algebras on triangular skew coalgebra chains')
    verbs = parser.add_subparsers(dest='verb', metavar='verb')
    verbs.required = True
    for verb in ['validate', 'rules', 'confluence', 'complete', 'basis-count', 'oracle', 'normalize',
                 'hopf', 'rank', 'span-dim', 'coradical', 'comodule', 'lattice', 'report']:
        sub = verbs.add_parser(verb, parents=[common])
        if verb in ('normalize', 'hopf', 'rank', 'span-dim'):
            sub.add_argument('--expr', help='polynomial, e.g. "1 - 1/2 x[0,1,1]"')
        if verb == 'confluence':
            sub.add_argument('--assert-confluent', action='store_true', help='exit 3 unless every ambiguity resolves')
            sub.add_argument('--parallel', type=int, default=1, metavar='N', help='worker processes for residuals')
        if verb == 'complete':
            sub.add_argument('--max-degree', type=int, default=rewrite.DEFAULT_MAX_DEGREE)
            sub.add_argument('--max-iters', type=int, default=rewrite.DEFAULT_MAX_ITERS)
        if verb in ('basis-count', 'oracle'):
            sub.add_argument('--max-len', type=int, required=True)
        if verb == 'basis-count':
            sub.add_argument('--oracle', action='store_true', help='cross-check against linear algebra, exit 3 on mismatch')
        if verb == 'hopf':
            sub.add_argument('--op', choices=HOPF_OPS, required=True)
        if verb in ('comodule', 'lattice'):
            sub.add_argument('--level', type=int, required=True)
            sub.add_argument('--component', type=int, default=0)
        if verb == 'comodule':
            sub.add_argument('--dual', action='store_true')
            sub.add_argument('--sub', help='block numbers of a subcomodule, e.g. 1,2')
            sub.add_argument('--quotient', help='block numbers to factor out of --sub')
    preset = verbs.add_parser('preset')
    preset.add_argument('name', help=f'one of {", ".join(sorted(chains.PRESETS))}')
    preset.add_argument('--param', action='append', metavar='K=V')
    preset.add_argument('--pretty', action='store_true')
    preset.add_argument('--verbose', action='store_true')
    return parser

def _pretty(value: Any, indent: str = '') -> List[str]:
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(x, dict) for x in (v if isinstance(v, list) else [v])):
                lines += [f'{indent}{k}:'] + _pretty(v, indent + '  ')
            else:
                lines += [f'{indent}{k}: {json.dumps(v)}']
        return lines
    if isinstance(value, list) and value and all(isinstance(x, dict) for x in value):
        keys = list(value[0])
        cells = [[json.dumps(row.get(k)) for k in keys] for row in value]
        widths = [max(len(k), *(len(c[n]) for c in cells)) for n, k in enumerate(keys)]
        lines = [indent + '  '.join(k.ljust(w) for k, w in zip(keys, widths))]
        return lines + [indent + '  '.join(c.ljust(w) for c, w in zip(row, widths)) for row in cells]
    return [indent + json.dumps(value)]

def render(payload: Any, pretty: bool) -> str:
    if pretty:
        return '\n'.join(_pretty(payload))
    return json.dumps(payload, sort_keys=True)

def run(argv: List[str] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SkewHopfException as e:
        print(json.dumps({'error': e.code, 'message': e.message}), file=sys.stderr)
        return e.exit_code
    setup_logging('DEBUG' if args.verbose else 'WARNING')
    try:
        payload, code = COMMANDS[args.verb](args)
    except SkewHopfException as e:
        getLogger(LOGGER_NAME).debug(f'{args.verb} failed with {e.code}')
        print(json.dumps({'error': e.code, 'message': e.message}), file=sys.stderr)
        return e.exit_code
    print(render(payload, args.pretty))
    return code

def main() -> None:
    sys.exit(run())

if __name__ == '__main__':
    main()
