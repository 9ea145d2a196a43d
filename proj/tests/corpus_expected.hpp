// Hand-tallied counts for the bundled 5-model mini-corpus under
// tests/golden/corpus/ (seeds 100..104, 2x2 grid, 1-4 icons, 1-3 openings).
// Recomputed with an independent scripted recount over the JSON files
// whenever the corpus changes.
#pragma once

#define FPV_CORPUS_IMAGES 5
#define FPV_CORPUS_ROOMS 20
#define FPV_CORPUS_ICONS 17
#define FPV_CORPUS_WALLS 60
#define FPV_CORPUS_OPENINGS 8
// rooms per image -> frequency
#define FPV_CORPUS_ROOM_HIST {{4, 5}}
#define FPV_CORPUS_ICON_HIST {{2, 1}, {3, 1}, {4, 3}}
#define FPV_CORPUS_WALL_HIST {{12, 5}}
// (class code, instance count), count descending then code ascending
#define FPV_CORPUS_ROOM_RANK {{5, 5}, {9, 4}, {4, 3}, {1, 2}, {3, 2}, {6, 2}, {7, 1}, {10, 1}}
#define FPV_CORPUS_ICON_RANK {{9, 5}, {4, 3}, {10, 3}, {6, 2}, {3, 1}, {5, 1}, {7, 1}, {8, 1}}
