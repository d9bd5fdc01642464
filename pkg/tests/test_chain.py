import json
import pytest
from helpers import chain_of
from SkewHopf.lib.chain import ChainException, ChainSpec, WindowException, preset, validate
from SkewHopf.lib.ncpoly import letter

def spec(levels, window=(0, 1), indices=('1', '2', '3', '4')):
    return ChainSpec(list(indices), [list(indices)], window, levels)

def test_collapse_m4_passes_with_pairs():
    chain = chain_of('collapse-m4', lo=-1, hi=1)
    assert chain.sup_partition() == ([['1', '2'], ['3', '4']], 2)
    assert chain.sup_ok
    assert chain.warnings == []

def test_needge2_warns_about_singletons():
    chain = chain_of('needge2', n=2)
    assert chain.sup_partition() == ([['1'], ['2']], 1)
    assert not chain.sup_ok
    assert 'SUP_CLASS_TOO_SMALL' in chain.warnings

def test_free_matrix_has_one_class():
    assert chain_of('free-matrix', n=3, lo=0, hi=2).sup_partition() == ([['1', '2', '3']], 3)

def test_positive_window_start_is_a_warning():
    assert 'POSITIVE_WINDOW_START' in chain_of('free-matrix', n=2, lo=1, hi=2).warnings

@pytest.mark.parametrize('levels, code', [
    ([(0, [['1', '2'], ['3', '4']]), (1, [['1', '2', '3', '4']])], 'NON_REFINING'),
    ([(0, [['1', '3'], ['2', '4']])], 'NON_INTERVAL_BLOCK'),
    ([(0, [['1', '2'], ['3']])], 'NON_INTERVAL_BLOCK'),
    ([(0, [['1', '2'], ['2', '3', '4']])], 'DUPLICATE_INDEX'),
])
def test_invalid_blocks(levels, code):
    with pytest.raises(ChainException) as e:
        validate(spec(levels))
    assert e.value.code == code

def test_duplicate_index():
    with pytest.raises(ChainException) as e:
        validate(spec([], indices=('1', '1')))
    assert e.value.code == 'DUPLICATE_INDEX'

def test_empty_window():
    with pytest.raises(ChainException) as e:
        validate(spec([], window=(1, 0)))
    assert e.value.code == 'EMPTY_WINDOW'
    assert e.value.exit_code == 1

def test_presence_pattern():
    chain = chain_of('collapse-m4', lo=-1, hi=1)
    assert chain.present(0, '1', '3')
    assert not chain.present(0, '3', '1')
    assert chain.present(1, '3', '1')
    assert len(chain.letters(-1)) == 16
    assert len(chain.letters(0)) == 12

def test_presence_outside_window():
    chain = chain_of('collapse-m4', lo=-1, hi=1)
    with pytest.raises(WindowException) as e:
        chain.present(2, '1', '1')
    assert e.value.code == 'LEVEL_OUT_OF_WINDOW'
    assert e.value.exit_code == 2

def test_theta():
    chain = chain_of('collapse-m4', lo=-1, hi=1)
    assert chain.theta(-1, letter(-1, 2, 3)) is None
    assert chain.theta(-1, letter(-1, 1, 2)) == letter(0, 2, 1)
    assert chain.theta(0, letter(0, 1, 3)) == letter(1, 3, 1)
    with pytest.raises(WindowException):
        chain.theta(1, letter(1, 1, 1))

def test_theta_images_are_present_both_ways():
    for chain in (chain_of('collapse-m4', lo=-1, hi=1), chain_of('growth', k=3), chain_of('needge2', n=3)):
        for r in range(chain.lo, chain.hi):
            for l in chain.letters(r):
                image = chain.theta(r, l)
                if image is not None:
                    assert chain.present(r, l.row, l.col) and chain.present(r + 1, l.col, l.row)

def test_presets_satisfy_pattern_laws():
    for name, params in [('free-matrix', {'n': 3, 'lo': 0, 'hi': 2}), ('collapse-m4', {'lo': -1, 'hi': 1}),
                         ('needge2', {'n': 3}), ('growth', {'k': 3})]:
        assert chain_of(name, **params).check_invariants() == []

def test_pattern_duality_on_equal_blocks():
    chain = chain_of('collapse-m4', lo=-1, hi=1)
    assert chain.blocks[0] == chain.blocks[1]
    for i in '1234':
        for j in '1234':
            assert chain.present(0, i, j) == chain.present(1, j, i)

def test_growth_block_sizes():
    chain = chain_of('growth', k=3)
    assert [chain.block_sizes(r) for r in chain.levels] == [[8], [4, 4], [2, 2, 2, 2], [2, 2, 2, 2]]

def test_collapse_m4_relations():
    chain = chain_of('collapse-m4', lo=-1, hi=1)
    assert chain.same_block(-1, '1', '4')
    for r in (0, 1):
        assert chain.same_block(r, '1', '2') and chain.same_block(r, '3', '4')
        assert not chain.same_block(r, '2', '3')

def test_levels_inherit_from_below():
    chain = validate(spec([(0, [['1', '2'], ['3', '4']])], window=(-1, 2)))
    assert chain.blocks[-1] == [('1', '2', '3', '4')]
    assert chain.blocks[2] == [('1', '2'), ('3', '4')]

def test_spec_json_round_trip(tmp_path):
    original = preset('collapse-m4', lo=-1, hi=1)
    path = tmp_path / 'm4.json'
    path.write_text(json.dumps(original.to_json()))
    loaded = ChainSpec.load(str(path))
    assert loaded == original
    assert validate(loaded).blocks == validate(original).blocks

def test_unknown_keys_rejected():
    data = preset('free-matrix').to_json()
    data['colour'] = 'blue'
    with pytest.raises(ChainException) as e:
        ChainSpec.from_json(data)
    assert e.value.code == 'UNKNOWN_KEY'

def test_bad_json(tmp_path):
    path = tmp_path / 'bad.json'
    path.write_text('{"indices": [')
    with pytest.raises(ChainException) as e:
        ChainSpec.load(str(path))
    assert e.value.code == 'BAD_SPEC'

def test_preset_errors():
    with pytest.raises(ChainException) as e:
        preset('moebius')
    assert e.value.code == 'UNKNOWN_PRESET'
    with pytest.raises(ChainException) as e:
        preset('free-matrix', n=0)
    assert e.value.code == 'BAD_PARAMS'
    with pytest.raises(ChainException) as e:
        preset('growth', k='three')
    assert e.value.code == 'BAD_PARAMS'
    with pytest.raises(ChainException) as e:
        preset('growth', depth=3)
    assert e.value.code == 'BAD_PARAMS'
