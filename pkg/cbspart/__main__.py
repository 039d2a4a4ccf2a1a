# Copyright (C) 2025 The cbspart developers
#
# This file is part of cbspart.
#
# cbspart is released under the MIT license. See LICENSE in the root of the
# repository for full licensing details.

import sys
from .cli import main

sys.exit(main())
