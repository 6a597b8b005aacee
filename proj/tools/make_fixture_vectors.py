#!/usr/bin/env python3
# Copyright 2026 The rulebridge Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates data/fixtures/vectors.txt, the small topic-clustered word
vector vocabulary used by the test suites and the demo configuration.

Each topic gets a random base direction; member words are the base plus
gaussian noise. Function words get short vectors so they barely move the
document mean. Output is deterministic for a given seed.
"""

import argparse
import numpy as np

DIM = 16

TOPICS = {
    "time": "every time day week year month hour minute daily weekly "
            "temporal schedule date clock sunrise sunset tomorrow",
    "event": "any event starts started start activity begins stops stop ends "
             "happens moving",
    "power": "device turned turn on off switch power enabled disabled ac "
             "conditioning appliance plug",
    "environment": "air pressure quality temperature humidity weather "
                   "purifier filter cleaning cleaned sensed rain",
    "change": "rises drops above below increased decreased changed changes "
              "goes",
    "light": "brightness light lights color lamp bulb dim",
    "media": "photo photos image picture taken take video camera upload "
             "uploaded album",
    "social": "post posts shared share profile update page like likes "
              "received feed tweet follower friend",
    "storage": "file files save saved bookmark web site information contact "
               "contacts list item items reading document folder media",
    "planning": "calendar reminder remind note notes task todo",
    "message": "message messages send email sms notification display call "
               "text",
    "interaction": "button pressed press tap pressing",
    "location": "location position registration enter entered exit exited "
                "area home arrive leave",
    "kitchen": "cooking cook oven kitchen",
    "access": "door window open close opened closed lock unlock locked "
              "unlocked garage gate",
    "sound": "music song playlist volume speaker play playing",
    "focus": "focusing focus",
    "misc": "animal seen outside needs mix favorites diy service connect "
            "get information data",
}

FUNCTION_WORDS = "a c to the your an by you of is has been from new in for " \
                 "with at it my"


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=20170501)
    parser.add_argument("--out", default="data/fixtures/vectors.txt")
    args = parser.parse_args()

    rng = np.random.RandomState(args.seed)
    rows = {}
    for topic in sorted(TOPICS):
        base = rng.normal(size=DIM)
        base /= np.linalg.norm(base)
        for word in TOPICS[topic].split():
            if word in rows:
                continue
            noise = rng.normal(scale=0.22, size=DIM)
            rows[word] = base + noise
    for word in FUNCTION_WORDS.split():
        if word not in rows:
            rows[word] = rng.normal(scale=0.08, size=DIM)

    with open(args.out, "w") as out:
        out.write("%d %d\n" % (len(rows), DIM))
        for word in sorted(rows):
            out.write(word + " " + " ".join("%.6f" % x for x in rows[word]) + "\n")


if __name__ == "__main__":
    main()
