# lets pytest import SkewHopf from a plain checkout
