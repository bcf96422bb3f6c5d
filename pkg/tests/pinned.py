"""Frozen oracle values; regenerate with ``python3 scripts/pin_oracles.py``."""

ELLIPE_056 = 1.4392551323724665

TAIL_196 = 0.024997895148220435

COND_MEAN_C1 = 1.525135276160981

C0_A07_XI08 = {'B1': 0.5833081343011514, 'B2': 0.13036091846973574, 'xi1': 0.3, 'xi2': 0.2240658159019952}

MC_A07_XI08 = {'B1': 0.5832943923040503,
 'B2': 0.1303600137563589,
 'se1': 5.652596887723264e-05,
 'se2': 6.753000526757223e-05}

MC_A07_XI08_C06 = {'B1': 0.7128106894881313,
 'B2': 0.20419152920501427,
 'se1': 4.9746332294428655e-05,
 'se2': 7.371767890578737e-05}

ZERO_RATE_A15_XI04 = 1.051

EXTREMA_RATE_A3_XI04 = 1.325

WHITE_ZETA_MC = {'mean': [-0.0005694869934039229,
          -0.5638781322838076,
          0.5643395919309016,
          0.0002036055961123358,
          -0.0009370143816461476],
 'stderr': [0.00044720675827479686,
            0.0003691878918585477,
            0.0003691256783866346,
            0.0004474925875978649,
            0.0004472426734078606]}

WHITE_V_L1 = {'V': [[1.4874783024043858, 0.7656166813295098, 1.165280934075135],
       [0.7656166813295098, 1.5153986411457963, 0.8312953216805031],
       [1.165280934075135, 0.8312953216805031, 1.9981725309997063]],
 'V00_stderr': 0.03388958020844961,
 'n': 10000,
 'reps': 4000}

ARMA_X2_AUTOCOV = {'gamma': [1.0425440989703756,
           -0.16387432493819626,
           0.15405204198064285,
           -0.022405539184127132,
           0.022626668436722366,
           -0.0029356639221871077,
           0.0027940287459320558,
           -0.0009139623528649203,
           0.0003414814711864844,
           0.00011458731809831188,
           -0.0004542790504212534],
 'n': 10000000,
 'stderr': [0.0004878801064309928,
            0.00039405347079670533,
            0.00035640780245096943,
            0.0003470987458897266,
            0.00034532208257750035,
            0.0003448813489087815,
            0.0003449664501352118,
            0.0003449806522659272,
            0.00034498295028461025,
            0.0003449832885996191,
            0.0003449833615734301]}
