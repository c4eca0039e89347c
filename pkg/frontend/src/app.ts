// Entry point: fetch the vocabularies, then hand the page to the form.

import { RegistryClient, resolveRegistryBase } from "./api.js";
import { renderForm, renderLoadError } from "./form.js";

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) {
    return;
  }
  const client = new RegistryClient(resolveRegistryBase(window.location));
  try {
    const vocab = await client.vocabularies();
    renderForm(root, vocab, client);
  } catch (error) {
    renderLoadError(root, `Could not load vocabularies from the registry: ${String(error)}`);
  }
}

void boot();
