/** Typed fetch wrappers over the backend API. */

import {
  ApiErrorBody,
  CellSetWire,
  CubeMetadata,
  CubeSummary,
  MembersPage,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly body: ApiErrorBody,
  ) {
    super(body.message);
  }
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(this.base + path);
    if (!response.ok) {
      throw new ApiError((await response.json()) as ApiErrorBody);
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ status: string }> {
    return this.getJson("/api/health");
  }

  cubes(): Promise<CubeSummary[]> {
    return this.getJson("/api/cubes");
  }

  metadata(cube: string): Promise<CubeMetadata> {
    return this.getJson(`/api/cubes/${encodeURIComponent(cube)}/metadata`);
  }

  members(
    cube: string,
    role: string,
    hierarchy: string,
    parent?: string,
  ): Promise<MembersPage> {
    const params = new URLSearchParams({ role, hierarchy });
    if (parent) params.set("parent", parent);
    return this.getJson(
      `/api/cubes/${encodeURIComponent(cube)}/members?${params.toString()}`,
    );
  }

  async query(cube: string, mdx: string): Promise<CellSetWire> {
    const response = await fetch(this.base + "/api/query", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ cube, mdx, format: "json" }),
    });
    if (!response.ok) {
      throw new ApiError((await response.json()) as ApiErrorBody);
    }
    return (await response.json()) as CellSetWire;
  }

  async queryCsv(cube: string, mdx: string): Promise<string> {
    const response = await fetch(this.base + "/api/query", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ cube, mdx, format: "csv" }),
    });
    if (!response.ok) {
      throw new ApiError((await response.json()) as ApiErrorBody);
    }
    return response.text();
  }
}
