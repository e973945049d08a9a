"""Prompt workbench for text-to-image generation.

Corpus-grounded prompt suggestion, similarity layout and clustering of
generated images, and image-derived modifier menus, wired into one
iterative refinement loop. All neural models (chat, embedders, captioner,
image generator) sit behind provider interfaces with deterministic
offline stand-ins, so the whole system runs headless without a GPU.
"""

__version__ = "0.1.0"
