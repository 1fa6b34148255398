import pytest

from mottfefet.senseamp import CsaParams, CurrentSenseAmp, sense


def test_params_validation():
    with pytest.raises(ValueError):
        CsaParams(i_ref=0.0)
    with pytest.raises(ValueError):
        CsaParams(hysteresis_band=1.0)
    with pytest.raises(ValueError):
        CsaParams(hysteresis_band=-0.1)


def test_high_current_reads_one():
    res = sense(225e-6)
    assert res.bit == 1
    assert res.v_out == pytest.approx(1.2)


def test_low_current_reads_zero():
    res = sense(450e-9)
    assert res.bit == 0
    assert res.v_out == 0.0


def test_reference_tie_first_use_is_zero():
    assert sense(10e-6).bit == 0


def test_negative_current_rejected():
    with pytest.raises(ValueError):
        sense(-1e-9)


def test_band_holds_previous_decision():
    amp = CurrentSenseAmp()
    assert amp.sense(100e-6).bit == 1
    # inside the band: previous decision is kept
    assert amp.sense(10e-6).bit == 1
    assert amp.sense(10.5e-6).bit == 1
    # a clear low decision flips and then holds inside the band
    assert amp.sense(1e-6).bit == 0
    assert amp.sense(9.5e-6).bit == 0


def test_band_never_toggles_on_alternation():
    amp = CurrentSenseAmp()
    decisions = {amp.sense(i).bit for i in (9.2e-6, 10.8e-6) * 10}
    assert decisions == {0}


def test_monotone_decision_fresh_state():
    p = CsaParams()
    currents = [i * 1e-6 for i in (1, 5, 9, 11, 15, 100, 500)]
    bits = [sense(i, p).bit for i in currents]
    assert bits == sorted(bits)
    assert sense(12e-6, p).bit == 1


def test_v_out_follows_supply():
    p = CsaParams(v_dd=0.9)
    assert sense(1e-3, p).v_out == pytest.approx(0.9)
